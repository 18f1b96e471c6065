"""Right-hand sides of the three fractional Hadamard/Ostrowski/Simpson-type
inequalities, their corollary presentations, and verdicts."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from . import coeffs
from .convexity import (
    DEFAULT_SAMPLER,
    FunctionSpec,
    Sampler,
    check_convex,
    check_m_convex,
    check_quasi_convex,
    check_s_convex,
    derivative_power,
)
from .expr import EvaluationError
from .quadrature import DEFAULT_QUAD, QuadratureConfig, graded_breakpoints, integrate
from .sfunc import InequalityParams, sf_direct, sf_identity_rhs, sf_m_direct, sf_m_identity_rhs
from .specfun import beta

__all__ = [
    "Family",
    "CorollaryId",
    "BoundReport",
    "CorollaryCheck",
    "rhs_s_convex",
    "rhs_quasi",
    "rhs_m_convex",
    "general_rhs",
    "specialize",
    "display_factor",
    "corollary_rhs_printed",
    "corollary_consistency",
    "hypothesis_gate",
    "verify",
    "hh_check",
    "NumericalFault",
]


class Family(str, Enum):
    S_CONVEX = "s-convex"
    QUASI = "quasi-convex"
    M_CONVEX = "m-convex"


class CorollaryId(str, Enum):
    SIMPSON = "simpson"
    MIDPOINT = "midpoint"
    TRAPEZOID = "trapezoid"
    OSTROWSKI = "ostrowski"


class NumericalFault(ArithmeticError):
    pass


def _power_mean_factor(a1: float, q: float) -> float:
    # q = 1 exactly: skip the pow so a1**0 never meets a 0**0 corner
    return 1.0 if q == 1.0 else a1 ** (1.0 - 1.0 / q)


def _abs_derivs(f: FunctionSpec, pts, M: Optional[float]) -> np.ndarray:
    if M is not None:
        return np.full(len(pts), float(M))
    return np.abs(f.dfv(np.asarray(pts, dtype=np.float64)))


def _s_of(p: InequalityParams, s: Optional[float]) -> float:
    s = p.s if s is None else s
    if s is None:
        raise ValueError("s-convex bound needs s")
    return s


def _m_of(p: InequalityParams, m: Optional[float]) -> float:
    m = p.m if m is None else m
    if m is None:
        raise ValueError("m-convex bound needs m")
    return m


def rhs_s_convex(f: FunctionSpec, p: InequalityParams, s: Optional[float] = None, M: Optional[float] = None) -> float:
    """Bound on ``|S_f(x, lam, alpha, a, b)|`` when ``|f'|^q`` is s-convex.

    With ``M`` given, every ``|f'(.)|`` is replaced by ``M``.
    """
    s = _s_of(p, s)
    al, lam, q = p.alpha, p.lam, p.q
    A1, A2, A3 = coeffs.a1(al, lam), coeffs.a2_s(al, lam, s), coeffs.a3_s(al, lam, s)
    gx, ga, gb = _abs_derivs(f, [p.x, p.a, p.b], M) ** q
    w = p.b - p.a
    left = (p.x - p.a) ** (al + 1.0) / w * (gx * A2 + ga * A3) ** (1.0 / q)
    right = (p.b - p.x) ** (al + 1.0) / w * (gx * A2 + gb * A3) ** (1.0 / q)
    return _power_mean_factor(A1, q) * (left + right)


def rhs_quasi(f: FunctionSpec, p: InequalityParams, M: Optional[float] = None) -> float:
    """Bound when ``|f'|^q`` is quasi-convex; carries the full ``A1`` factor."""
    al, q = p.alpha, p.q
    gx, ga, gb = _abs_derivs(f, [p.x, p.a, p.b], M) ** q
    w = p.b - p.a
    left = (p.x - p.a) ** (al + 1.0) / w * max(gx, ga) ** (1.0 / q)
    right = (p.b - p.x) ** (al + 1.0) / w * max(gx, gb) ** (1.0 / q)
    return coeffs.a1(al, p.lam) * (left + right)


def rhs_m_convex(f: FunctionSpec, p: InequalityParams, m: Optional[float] = None, M: Optional[float] = None) -> float:
    """Bound on ``|S_f(m x, lam, alpha, m a, m b)|`` when ``|f'|^q`` is m-convex."""
    m = _m_of(p, m)
    al, lam, q = p.alpha, p.lam, p.q
    A1, A2, A3 = coeffs.a1(al, lam), coeffs.a2_m(al, lam), coeffs.a3_m(al, lam)
    gx, ga, gb = _abs_derivs(f, [m * p.x, p.a, p.b], M) ** q
    w = p.b - p.a
    left = m**al * (p.x - p.a) ** (al + 1.0) / w * (gx * A2 + m * ga * A3) ** (1.0 / q)
    right = m**al * (p.b - p.x) ** (al + 1.0) / w * (gx * A2 + m * gb * A3) ** (1.0 / q)
    return _power_mean_factor(A1, q) * (left + right)


def general_rhs(family: Family | str, f: FunctionSpec, p: InequalityParams, M: Optional[float] = None) -> float:
    family = Family(family)
    if family is Family.S_CONVEX:
        return rhs_s_convex(f, p, M=M)
    if family is Family.QUASI:
        return rhs_quasi(f, p, M=M)
    return rhs_m_convex(f, p, M=M)


def lhs_value(family: Family | str, f: FunctionSpec, p: InequalityParams, cfg: QuadratureConfig = DEFAULT_QUAD) -> tuple[float, float]:
    """``(S_f via fractional integrals, S_f via the f' identity)``."""
    if Family(family) is Family.M_CONVEX:
        return sf_m_direct(f, None, p, cfg), sf_m_identity_rhs(f, None, p, cfg)
    return sf_direct(f, p, cfg), sf_identity_rhs(f, p, cfg)


# --------------------------------------------------------------------------
# corollaries


def specialize(cid: CorollaryId | str, p: InequalityParams, M: Optional[float] = None) -> InequalityParams:
    cid = CorollaryId(cid)
    if cid is CorollaryId.SIMPSON:
        return replace(p, x=0.5 * (p.a + p.b), lam=1.0 / 3.0)
    if cid is CorollaryId.MIDPOINT:
        return replace(p, x=0.5 * (p.a + p.b), lam=0.0)
    if cid is CorollaryId.TRAPEZOID:
        return replace(p, lam=1.0)
    if M is None:
        raise ValueError("the Ostrowski corollary needs a derivative bound M")
    return replace(p, lam=0.0)


def display_factor(cid: CorollaryId | str, family: Family | str, p: InequalityParams) -> float:
    """Positive factor the corollary applies to ``S_f`` before bounding it.

    For the m-convex family the interval is ``[m a, m b]``, so the midpoint
    forms scale by ``2^(alpha-1) / (m (b - a))^(alpha-1)`` and the other two
    by ``m^(1 - alpha)``; these are the factors under which the printed
    middle expressions equal the scaled ``S_f``.
    """
    cid, family = CorollaryId(cid), Family(family)
    al = p.alpha
    scale = p.m if family is Family.M_CONVEX else 1.0
    if cid in (CorollaryId.SIMPSON, CorollaryId.MIDPOINT):
        return 2.0 ** (al - 1.0) / (scale * (p.b - p.a)) ** (al - 1.0)
    return scale ** (1.0 - al)


def corollary_rhs_printed(
    cid: CorollaryId | str,
    family: Family | str,
    p: InequalityParams,
    f: Optional[FunctionSpec] = None,
    M: Optional[float] = None,
) -> float:
    """Each corollary's own displayed bound, coded from the display itself.

    ``p`` must already be specialised; s or m is read from ``p``.
    """
    cid, family = CorollaryId(cid), Family(family)
    al, q, a, b, x = p.alpha, p.q, p.a, p.b, p.x
    w = b - a
    pm = lambda base: 1.0 if q == 1.0 else base ** (1.0 - 1.0 / q)
    root = lambda v: v ** (1.0 / q)
    ends = ((x - a) ** (al + 1.0) + (b - x) ** (al + 1.0)) / w

    if cid is CorollaryId.OSTROWSKI:
        if M is None:
            raise ValueError("the Ostrowski corollary needs M")
        if family is Family.S_CONVEX:
            s = p.s
            return M * pm(1.0 / (al + 1.0)) * root(1.0 / (al + s + 1.0) + beta(al + 1.0, s + 1.0)) * ends
        if family is Family.QUASI:
            return M / (al + 1.0) * ends
        m = p.m
        return m * M / (al + 1.0) * root((al + m + 1.0) / (al + 2.0)) * ends

    if f is None:
        raise ValueError("corollary bound needs the function")
    mid = 0.5 * (a + b)

    if family is Family.S_CONVEX:
        s = p.s
        if cid is CorollaryId.TRAPEZOID:
            gx, ga, gb = np.abs(f.dfv(np.array([x, a, b])))
            bb = beta(al + 1.0, s + 1.0)
            c2 = al / ((s + 1.0) * (al + s + 1.0))
            c3 = 1.0 / (s + 1.0) - bb
            return pm(al / (al + 1.0)) * (
                (x - a) ** (al + 1.0) / w * root(c2 * gx**q + ga**q * c3)
                + (b - x) ** (al + 1.0) / w * root(c2 * gx**q + gb**q * c3)
            )
        gm, ga, gb = np.abs(f.dfv(np.array([mid, a, b])))
        if cid is CorollaryId.SIMPSON:
            t = 1.0 / 3.0
            A1, A2, A3 = coeffs.a1(al, t), coeffs.a2_s(al, t, s), coeffs.a3_s(al, t, s)
            return w / 4.0 * pm(A1) * (root(gm**q * A2 + ga**q * A3) + root(gm**q * A2 + gb**q * A3))
        bb = beta(al + 1.0, s + 1.0)
        return w / 4.0 * pm(1.0 / (al + 1.0)) * (
            root(gm**q / (al + s + 1.0) + ga**q * bb) + root(gm**q / (al + s + 1.0) + gb**q * bb)
        )

    if family is Family.QUASI:
        if cid is CorollaryId.TRAPEZOID:
            gx, ga, gb = np.abs(f.dfv(np.array([x, a, b])))
            return al / (al + 1.0) * (
                (x - a) ** (al + 1.0) / w * root(max(gx**q, ga**q))
                + (b - x) ** (al + 1.0) / w * root(max(gx**q, gb**q))
            )
        gm, ga, gb = np.abs(f.dfv(np.array([mid, a, b])))
        if cid is CorollaryId.SIMPSON:
            return w / 4.0 * coeffs.a1(al, 1.0 / 3.0) * (max(gm, ga) + max(gm, gb))
        return w / 4.0 / (al + 1.0) * (root(max(gm**q, ga**q)) + root(max(gm**q, gb**q)))

    m = p.m
    if cid is CorollaryId.TRAPEZOID:
        gx, ga, gb = np.abs(f.dfv(np.array([m * x, a, b])))
        # printed with |f'(a)|, |f'(b)| not raised to q and without m^alpha
        return al / (al + 1.0) * root(1.0 / (2.0 * (al + 2.0))) * (
            (x - a) ** (al + 1.0) / w * root((al + 1.0) * gx**q + (al + 3.0) * m * ga)
            + (b - x) ** (al + 1.0) / w * root((al + 1.0) * gx**q + (al + 3.0) * m * gb)
        )
    gm, ga, gb = np.abs(f.dfv(np.array([m * mid, a, b])))
    if cid is CorollaryId.SIMPSON:
        t = 1.0 / 3.0
        A1, A2, A3 = coeffs.a1(al, t), coeffs.a2_m(al, t), coeffs.a3_m(al, t)
        return m * w / 4.0 * pm(A1) * (root(gm**q * A2 + m * ga**q * A3) + root(gm**q * A2 + m * gb**q * A3))
    return m * w / 4.0 / (al + 1.0) * root(1.0 / (al + 2.0)) * (
        root((al + 1.0) * gm**q + m * ga**q) + root((al + 1.0) * gm**q + m * gb**q)
    )


@dataclass(frozen=True)
class CorollaryCheck:
    corollary: str
    family: str
    params: InequalityParams
    general: float  # display factor times the general bound at the specialised params
    printed: float
    tol: float

    @property
    def diff(self) -> float:
        return abs(self.general - self.printed)

    @property
    def finding(self) -> bool:
        return not self.diff <= self.tol


def derivative_bound_for(family: Family | str, f: FunctionSpec, p: InequalityParams) -> float:
    """Sup of ``|f'|`` over every point the bound evaluates ``f'`` at."""
    lo = p.a
    if Family(family) is Family.M_CONVEX:
        lo = min(p.a, p.m * p.a)
    return f.derivative_bound(lo, p.b)


def corollary_consistency(
    cid: CorollaryId | str,
    family: Family | str,
    f: FunctionSpec,
    p: InequalityParams,
    M: Optional[float] = None,
    tol: float = 1e-10,
) -> CorollaryCheck:
    cid, family = CorollaryId(cid), Family(family)
    if cid is CorollaryId.OSTROWSKI and M is None:
        M = derivative_bound_for(family, f, p)
    sp = specialize(cid, p, M)
    M_used = M if cid is CorollaryId.OSTROWSKI else None
    general = display_factor(cid, family, sp) * general_rhs(family, f, sp, M=M_used)
    printed = corollary_rhs_printed(cid, family, sp, f, M_used)
    return CorollaryCheck(cid.value, family.value, sp, float(general), float(printed), tol)


# --------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    corollary: str
    params: Optional[InequalityParams]
    status: str  # holds | violated | skip | fault
    lhs: float = math.nan
    lhs_path: str = "direct"
    lhs_check: float = math.nan
    residual: float = math.nan
    rhs: float = math.nan
    tolerance: float = math.nan
    reason: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["slack"] = self.slack
        d["holds"] = self.holds
        return d


def default_tolerance(rhs: float) -> float:
    return 1e-8 + 1e-6 * abs(rhs)


@lru_cache(maxsize=4096)
def hypothesis_gate(
    f: FunctionSpec, family: Family | str, q: float, param: Optional[float], a: float, b: float,
    sampler: Sampler = DEFAULT_SAMPLER,
) -> tuple[bool, str]:
    """Check the theorem's hypothesis on ``|f'|^q``; returns ``(ok, reason)``."""
    family = Family(family)
    try:
        g = derivative_power(f, q)
        if family is Family.S_CONVEX:
            v = check_s_convex(g, param, sampler, (a, b))
        elif family is Family.QUASI:
            v = check_quasi_convex(g, sampler, (a, b))
        else:
            v = check_m_convex(g, param, sampler, (0.0, b))
    except (ValueError, EvaluationError) as exc:
        return False, f"hypothesis not checkable: {exc}"
    if v.passed:
        return True, ""
    return False, f"|f'|^{q:g} not {v.kind}: witness {v.witness}"


def _param(family: Family, p: InequalityParams) -> Optional[float]:
    if family is Family.S_CONVEX:
        return p.s
    if family is Family.M_CONVEX:
        return p.m
    return None


def verify(
    f: FunctionSpec,
    family: Family | str,
    p: InequalityParams,
    corollary: Optional[CorollaryId | str] = None,
    tol: Optional[float] = None,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    sampler: Sampler = DEFAULT_SAMPLER,
    gate: bool = True,
    agreement_tol: float = 1e-8,
    M: Optional[float] = None,
) -> BoundReport:
    """Check one instance of a theorem (or one of its corollaries).

    Vetoed hypotheses give ``status="skip"``; disagreement between the two
    S_f evaluations beyond ``agreement_tol`` gives ``status="fault"``.
    """
    family = Family(family)
    cname = "general" if corollary is None else CorollaryId(corollary).value
    if gate:
        ok, reason = hypothesis_gate(f, family, float(p.q), _param(family, p), p.a, p.b, sampler)
        if not ok:
            return BoundReport(family.value, cname, p, "skip", reason=reason)

    factor = 1.0
    M_used = None
    if corollary is not None:
        cid = CorollaryId(corollary)
        if cid is CorollaryId.OSTROWSKI:
            M_used = derivative_bound_for(family, f, p) if M is None else M
        p = specialize(cid, p, M_used)
        factor = display_factor(cid, family, p)

    try:
        direct, check = lhs_value(family, f, p, cfg)
        rhs = factor * general_rhs(family, f, p, M=M_used)
    except EvaluationError as exc:
        return BoundReport(family.value, cname, p, "fault", reason=str(exc))
    lhs = factor * abs(direct)
    residual = factor * abs(direct - check)
    tol = default_tolerance(rhs) if tol is None else tol
    if not residual <= agreement_tol:
        status = "fault"
        reason = f"S_f paths disagree by {residual:.3e} > {agreement_tol:.1e}"
    elif rhs - lhs >= -tol:
        status, reason = "holds", ""
    else:
        status, reason = "violated", f"lhs exceeds rhs by {lhs - rhs:.3e}"
    return BoundReport(family.value, cname, p, status, lhs, "direct", factor * abs(check), residual, rhs, tol, reason)


def hh_check(
    f: FunctionSpec,
    a: Optional[float] = None,
    b: Optional[float] = None,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    sampler: Sampler = DEFAULT_SAMPLER,
    tol: float = 1e-12,
) -> tuple[BoundReport, BoundReport]:
    """Hermite-Hadamard: ``f(mid) <= mean(f) <= (f(a) + f(b)) / 2`` for convex f."""
    a = f.domain[0] if a is None else a
    b = f.domain[1] if b is None else b
    v = check_convex(f, sampler, (a, b))
    if not v.passed:
        skip = BoundReport("hermite-hadamard", "left", None, "skip", reason="not convex")
        return skip, replace(skip, corollary="right")
    mean = integrate(f.fv, graded_breakpoints(a, b, cfg), cfg.nodes) / (b - a)
    fm, fa, fb = f.fv(np.array([0.5 * (a + b), a, b]))
    ends = 0.5 * (fa + fb)

    def rep(side, lo, hi):
        status = "holds" if hi - lo >= -tol else "violated"
        return BoundReport("hermite-hadamard", side, None, status, float(lo), "quadrature", rhs=float(hi), tolerance=tol)

    return rep("left", fm, mean), rep("right", mean, ends)
