import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracineq.expr import parse
from fracineq.fracint import left_rl, paper_pair, right_rl
from fracineq.quadrature import QuadratureConfig, gauss_legendre, graded_breakpoints, integrate, unit_breakpoints

RHO = 2 / math.sqrt(math.pi)
ALPHAS = [0.25, 0.5, 1.0, 1.5, 2.0]
BETAS = [0, 1, 2, 3]
POINTS = [(0.0, 1.0), (0.3, 2.1), (-1.5, 0.25)]


def test_constant_closed_forms():
    one = parse("1")
    assert left_rl(one, 0.5, 0.0, 1.0) == pytest.approx(RHO, abs=1e-14)
    assert right_rl(one, 0.5, 1.0, 0.0) == pytest.approx(RHO, abs=1e-14)


def test_classical_reduction_examples():
    assert left_rl(parse("x"), 1.0, 0.0, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert right_rl(parse("x"), 1.0, 1.0, 0.0) == pytest.approx(0.5, abs=1e-15)


def test_power_rule_examples():
    ref = math.gamma(2) / math.gamma(2.5)
    assert left_rl(parse("x"), 0.5, 0.0, 1.0) == pytest.approx(ref, abs=1e-14)
    assert right_rl(parse("1-x"), 0.5, 1.0, 0.0) == pytest.approx(ref, abs=1e-14)


def power_rule_errors():
    """Worst errors of the power rule: (all alphas, alpha = 1 only)."""
    worst = worst_one = 0.0
    for alpha in ALPHAS:
        for beta in BETAS:
            for a, x in POINTS:
                got = left_rl(lambda t: (t - a) ** beta, alpha, a, x)
                ref = math.gamma(beta + 1) / math.gamma(alpha + beta + 1) * (x - a) ** (alpha + beta)
                err = abs(got - ref)
                worst = max(worst, err)
                if alpha == 1.0:
                    worst_one = max(worst_one, err)
    return worst, worst_one


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("beta", BETAS)
def test_power_rule(alpha, beta):
    for a, x in POINTS:
        got = left_rl(lambda t: (t - a) ** beta, alpha, a, x)
        ref = math.gamma(beta + 1) / math.gamma(alpha + beta + 1) * (x - a) ** (alpha + beta)
        assert got == pytest.approx(ref, abs=1e-9)
        mirrored = right_rl(lambda t: (2 * x - a - t) ** beta, alpha, 2 * x - a, x)
        assert mirrored == pytest.approx(ref, abs=1e-9)


def test_pair_constant():
    c, alpha, a, b, x = 2.5, 0.7, -1.0, 3.0, 0.4
    lo, hi = paper_pair(lambda t: np.full_like(t, c), alpha, a, b, x)
    g = math.gamma(alpha + 1)
    assert lo == pytest.approx(c * (x - a) ** alpha / g, rel=1e-14)
    assert hi == pytest.approx(c * (b - x) ** alpha / g, rel=1e-14)


def test_pair_square_classical():
    lo, hi = paper_pair(parse("x^2"), 1.0, 0.0, 1.0, 0.5)
    assert (lo, hi) == (pytest.approx(1 / 24, abs=1e-15), pytest.approx(7 / 24, abs=1e-15))


def test_pair_square_half_order():
    # kernels (t - a)^{-1/2} and (b - t)^{-1/2}: termwise monomial moments
    g = math.gamma(0.5)
    lo, hi = paper_pair(parse("x^2"), 0.5, 0.0, 1.0, 0.5)
    assert lo == pytest.approx(0.5**2.5 / (2.5 * g), abs=1e-13)
    # t^2 = (1 - u)^2 with u = 1 - t
    ref_hi = sum(c * 0.5 ** (k + 0.5) / ((k + 0.5) * g) for k, c in enumerate([1, -2, 1]))
    assert hi == pytest.approx(ref_hi, abs=1e-13)


def test_pair_orientation_convention():
    # the fixed limit is the subscript point: J_{x-} f(a) integrates over [a, x]
    lo, hi = paper_pair(parse("x"), 1.0, 0.0, 1.0, 0.25)
    assert lo == pytest.approx(0.25**2 / 2)
    assert hi == pytest.approx(0.5 - 0.25**2 / 2)


def test_pair_degenerate_members():
    assert paper_pair(parse("x+1"), 0.5, 0.0, 1.0, 0.0)[0] == 0.0
    assert paper_pair(parse("x+1"), 0.5, 0.0, 1.0, 1.0)[1] == 0.0
    with pytest.raises(ValueError):
        paper_pair(parse("x"), 0.5, 0.0, 1.0, 1.5)


@pytest.mark.parametrize("args", [(0.0, 0.0, 1.0), (-1.0, 0.0, 1.0), (0.5, 1.0, 1.0), (0.5, 1.0, 0.5)])
def test_left_rejects(args):
    alpha, a, x = args
    with pytest.raises(ValueError):
        left_rl(parse("x"), alpha, a, x)


def test_right_rejects():
    with pytest.raises(ValueError):
        right_rl(parse("x"), 0.5, 1.0, 1.0)


polys = st.lists(st.floats(-3, 3), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(polys, st.floats(-2, 2), st.floats(0.05, 3), st.floats(0.0, 1.0))
def test_alpha_one_is_classical(coeffs, a, width, frac):
    f = np.polynomial.Polynomial(coeffs)
    b = a + width
    x = a + frac * width
    cfg = QuadratureConfig()
    if x > a:
        direct = integrate(f, graded_breakpoints(a, x, cfg), cfg.nodes)
        assert left_rl(f, 1.0, a, x) == pytest.approx(direct, abs=1e-10)
    if x < b:
        direct = integrate(f, graded_breakpoints(x, b, cfg), cfg.nodes)
        assert right_rl(f, 1.0, b, x) == pytest.approx(direct, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(polys, polys, st.floats(-5, 5), st.floats(-5, 5), st.floats(0.1, 3))
def test_linearity(p1, p2, c1, c2, alpha):
    f1, f2 = np.polynomial.Polynomial(p1), np.polynomial.Polynomial(p2)
    combo = left_rl(lambda t: c1 * f1(t) + c2 * f2(t), alpha, 0.2, 1.7)
    split = c1 * left_rl(f1, alpha, 0.2, 1.7) + c2 * left_rl(f2, alpha, 0.2, 1.7)
    assert combo == pytest.approx(split, abs=1e-10)


def test_panel_doubling_converged():
    cfg = QuadratureConfig()
    for alpha in (0.05, 0.3, 1.0, 2.5):
        for src in ("exp(x)", "x^1.5", "sqrt(x+1)*log(x+2)"):
            f = parse(src)
            base = left_rl(f, alpha, 0.0, 1.3, cfg)
            assert abs(left_rl(f, alpha, 0.0, 1.3, cfg.refined()) - base) < cfg.tol


def test_gauss_legendre_exact_for_polynomials():
    nodes, weights = gauss_legendre(8)
    # 8 nodes integrate degree 15 exactly on [-1, 1]
    assert np.dot(weights, nodes**14) == pytest.approx(2 / 15, rel=1e-14)


def test_breakpoints_sorted_and_include_extra():
    br = unit_breakpoints(QuadratureConfig(), (0.37,))
    assert br[0] == 0.0 and br[-1] == 1.0
    assert np.all(np.diff(br) > 0)
    assert 0.37 in br


@pytest.mark.parametrize("kw", [dict(nodes=4), dict(panels=0), dict(tol=0.0), dict(ratio=1.5)])
def test_quadrature_config_validation(kw):
    with pytest.raises(ValueError):
        QuadratureConfig(**kw)
