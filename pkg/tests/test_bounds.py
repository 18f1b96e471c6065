import math

import pytest

from fracineq.bounds import (
    CorollaryId, Family, corollary_consistency, corollary_rhs_printed, default_tolerance, display_factor,
    hh_check, rhs_m_convex, rhs_quasi, rhs_s_convex, specialize, verify,
)
from fracineq.convexity import FunctionSpec, catalog, catalog_by_name
from fracineq.sfunc import InequalityParams

SQUARE = FunctionSpec.from_strings("square", "x^2", "2*x", (0, 1))
CONST = FunctionSpec.from_strings("const", "2", "0", (0, 1))
NEG = catalog_by_name()["negcontrol"]


def P(a=0.0, b=1.0, x=0.5, lam=0.0, alpha=1.0, **kw):
    return InequalityParams(a, b, x, lam, alpha, **kw)


def test_s_convex_anchor():
    assert rhs_s_convex(SQUARE, P(s=1.0)) == pytest.approx(1 / 4, abs=1e-15)
    rep = verify(SQUARE, "s-convex", P(s=1.0))
    assert rep.holds
    assert rep.lhs == pytest.approx(1 / 12, abs=1e-15)
    assert rep.slack == pytest.approx(1 / 6, abs=1e-15)


def test_quasi_anchor():
    assert rhs_quasi(SQUARE, P()) == pytest.approx(3 / 8, abs=1e-15)
    assert verify(SQUARE, "quasi-convex", P()).holds


def test_m_convex_anchor():
    p = P(m=0.5)
    assert rhs_m_convex(SQUARE, p) == pytest.approx(1 / 16, abs=1e-15)
    rep = verify(SQUARE, "m-convex", p)
    assert rep.holds and rep.lhs == pytest.approx(1 / 48, abs=1e-15)


def test_quasi_constant_derivative():
    lin = FunctionSpec.from_strings("lin", "-3*x", "-3", (0, 2))
    p = P(0.0, 2.0, 0.7, 0.4, 1.3)
    ends = (p.x - p.a) ** (p.alpha + 1) + (p.b - p.x) ** (p.alpha + 1)
    from fracineq.coeffs import a1
    assert rhs_quasi(lin, p) == pytest.approx(a1(1.3, 0.4) * 3 * ends / 2, rel=1e-14)


@pytest.mark.parametrize("q", [1.0, 2.0, 3.0])
@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0])
def test_m_one_matches_s_one(q, lam):
    f = catalog_by_name()["cube"]
    p = InequalityParams(0.0, 1.5, 0.4, lam, 0.8, q, s=1.0, m=1.0)
    assert rhs_m_convex(f, p) == pytest.approx(rhs_s_convex(f, p), abs=1e-12)


@pytest.mark.parametrize(
    "cid, x, lam",
    [("simpson", 0.5, 1 / 3), ("midpoint", 0.5, 0.0), ("trapezoid", 0.3, 1.0), ("ostrowski", 0.3, 0.0)],
)
def test_specialize(cid, x, lam):
    sp = specialize(cid, P(x=0.3, lam=0.7), M=1.0)
    assert (sp.x, sp.lam) == (pytest.approx(x), pytest.approx(lam))


def test_ostrowski_needs_m():
    with pytest.raises(ValueError):
        specialize("ostrowski", P())


def test_s_ostrowski_printed_example():
    p = P(s=1.0)
    assert corollary_rhs_printed("ostrowski", "s-convex", p, M=1.0) == pytest.approx(1 / 4, abs=1e-15)


def test_m_trapezoid_printed_matches_at_m_one_q_one():
    chk = corollary_consistency("trapezoid", "m-convex", SQUARE, P(x=0.3, m=1.0))
    assert not chk.finding


def test_quasi_midpoint_printed():
    p = P()
    expected = 0.25 * 0.5 * (max(1.0, 0.0) + max(1.0, 2.0))
    assert corollary_rhs_printed("midpoint", "quasi-convex", p, SQUARE) == pytest.approx(expected)


def test_midpoint_s_matches_general():
    f = catalog_by_name()["exp"]
    chk = corollary_consistency("midpoint", "s-convex", f, InequalityParams(0, 1, 0.5, 0, 1.7, 2.0, s=0.5))
    assert chk.diff <= 1e-12


def test_m_trapezoid_finding_is_reported_with_both_values():
    chk = corollary_consistency("trapezoid", "m-convex", SQUARE, P(x=0.3, m=0.5))
    assert chk.finding
    assert chk.general > 0 and chk.printed > 0 and chk.general != chk.printed


def test_display_factor_simpson():
    p = P(0.0, 3.0, 1.5, 1 / 3, 2.5, s=1.0)
    assert display_factor("simpson", "s-convex", p) == pytest.approx(2**1.5 / 3**1.5)
    assert display_factor("trapezoid", "quasi-convex", p) == 1.0


def test_ostrowski_monotone_in_m():
    f = catalog_by_name()["exp"]
    p = InequalityParams(0, 1, 0.3, 0, 0.7, 2.0, s=0.5)
    vals = [verify(f, "s-convex", p, corollary="ostrowski", M=M).rhs for M in (2.8, 3.0, 4.0, 10.0)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("family", list(Family))
def test_q_one_limit_is_continuous(family):
    f = catalog_by_name()["cube"]
    for lam in (0.0, 0.4, 1.0):
        p1 = InequalityParams(0.0, 1.5, 0.6, lam, 0.9, 1.0, s=1.0, m=0.5)
        p2 = InequalityParams(0.0, 1.5, 0.6, lam, 0.9, 1.0 + 1e-9, s=1.0, m=0.5)
        r1 = verify(f, family, p1, gate=False).rhs
        r2 = verify(f, family, p2, gate=False).rhs
        assert abs(r1 - r2) < 1e-6 * r1


def test_constant_holds():
    for family in Family:
        rep = verify(CONST, family, P(x=0.3, lam=0.4, alpha=0.6, s=0.5, m=0.5))
        assert rep.holds and rep.lhs <= 1e-14 and rep.rhs >= 0


def test_negcontrol_is_skipped():
    for family in Family:
        rep = verify(NEG, family, P(s=1.0, m=1.0))
        assert rep.status == "skip" and rep.reason


def test_fault_when_paths_disagree():
    from fracineq.quadrature import QuadratureConfig
    f = catalog_by_name()["pow0.5"]
    p = InequalityParams(0.5, 2.0, 0.5 + 0.37 * 1.5, 0.5, 0.3, s=0.5)
    rep = verify(f, "s-convex", p, cfg=QuadratureConfig(nodes=8, panels=1), agreement_tol=0.0)
    assert rep.status == "fault"


def test_default_tolerance():
    assert default_tolerance(2.0) == pytest.approx(1e-8 + 2e-6)


def test_report_invariants():
    rep = verify(SQUARE, "s-convex", P(s=1.0))
    assert rep.lhs >= 0
    assert rep.holds == (rep.slack >= -rep.tolerance)
    assert rep.to_dict()["slack"] == rep.slack


def test_hh_square():
    left, right = hh_check(SQUARE)
    assert (left.lhs, left.rhs, right.rhs) == (pytest.approx(0.25), pytest.approx(1 / 3), pytest.approx(0.5))
    assert left.holds and right.holds


def test_hh_exp():
    left, right = hh_check(catalog_by_name()["exp"])
    assert left.lhs == pytest.approx(math.exp(0.5))
    assert left.rhs == pytest.approx(math.e - 1, abs=1e-14)
    assert right.rhs == pytest.approx((1 + math.e) / 2)


def test_hh_skips_nonconvex():
    left, right = hh_check(NEG)
    assert left.status == right.status == "skip"


def hh_results():
    """(all convex entries hold, worst gap for the linear equality case)."""
    ok = True
    for f in catalog():
        if any(m.kind == "convex" for m in f.classes):
            left, right = hh_check(f)
            ok &= left.holds and right.holds
    left, right = hh_check(catalog_by_name()["linear"])
    return ok, max(abs(left.rhs - left.lhs), abs(right.rhs - right.lhs))


def test_hh_catalog():
    ok, gap = hh_results()
    assert ok and gap <= 1e-12
