"""The S_f operator, evaluated two independent ways.

``sf_direct`` uses the fractional-integral definition; ``sf_identity_rhs``
uses the representation as weighted integrals of ``f'``.  Agreement of the two
is the numerical certificate behind every inequality verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .coeffs import kink
from .convexity import FunctionSpec
from .fracint import paper_pair
from .quadrature import DEFAULT_QUAD, QuadratureConfig, integrate_unit

__all__ = ["InequalityParams", "sf_direct", "sf_identity_rhs", "sf_m_direct", "sf_m_identity_rhs"]


@dataclass(frozen=True)
class InequalityParams:
    a: float
    b: float
    x: float
    lam: float
    alpha: float
    q: float = 1.0
    s: Optional[float] = None
    m: Optional[float] = None

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if not self.a <= self.x <= self.b:
            raise ValueError(f"x={self.x} outside [{self.a}, {self.b}]")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda={self.lam} outside [0, 1]")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.q >= 1.0:
            raise ValueError(f"q must be >= 1, got {self.q}")
        for name in ("s", "m"):
            v = getattr(self, name)
            if v is not None and not 0.0 < v <= 1.0:
                raise ValueError(f"{name}={v} outside (0, 1]")

    def scaled(self, m: float) -> "InequalityParams":
        """Point ``m x`` on the interval ``[m a, m b]``."""
        return replace(self, a=m * self.a, b=m * self.b, x=m * self.x)


def sf_direct(f: FunctionSpec, p: InequalityParams, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    a, b, x, lam, alpha = p.a, p.b, p.x, p.lam, p.alpha
    width = b - a
    left = (x - a) ** alpha
    right = (b - x) ** alpha
    fx, fa, fb = f.fv(np.array([x, a, b]))
    j_lower, j_upper = paper_pair(f.fv, alpha, a, b, x, cfg)
    return (
        (1.0 - lam) * (left + right) / width * fx
        + lam * (left * fa + right * fb) / width
        - math.gamma(alpha + 1.0) / width * (j_lower + j_upper)
    )


def _kernel_integrals(f: FunctionSpec, p: InequalityParams, x: float, a: float, b: float, cfg: QuadratureConfig):
    cut = (kink(p.alpha, p.lam),)
    alpha, lam = p.alpha, p.lam
    lower = integrate_unit(lambda t: (t**alpha - lam) * f.dfv(t * x + (1.0 - t) * a), cfg, cut)
    upper = integrate_unit(lambda t: (lam - t**alpha) * f.dfv(t * x + (1.0 - t) * b), cfg, cut)
    return lower, upper


def sf_identity_rhs(f: FunctionSpec, p: InequalityParams, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    width = p.b - p.a
    lower, upper = _kernel_integrals(f, p, p.x, p.a, p.b, cfg)
    return ((p.x - p.a) ** (p.alpha + 1.0) * lower + (p.b - p.x) ** (p.alpha + 1.0) * upper) / width


def _m_of(p: InequalityParams, m: Optional[float]) -> float:
    m = p.m if m is None else m
    if m is None or not 0.0 < m <= 1.0:
        raise ValueError(f"m must lie in (0, 1], got {m}")
    return m


def sf_m_direct(f: FunctionSpec, m: Optional[float], p: InequalityParams, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``S_f(m x, lam, alpha, m a, m b)``."""
    return sf_direct(f, p.scaled(_m_of(p, m)), cfg)


def sf_m_identity_rhs(f: FunctionSpec, m: Optional[float], p: InequalityParams, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    m = _m_of(p, m)
    width = p.b - p.a
    lower, upper = _kernel_integrals(f, p, m * p.x, m * p.a, m * p.b, cfg)
    scale = m**p.alpha / width
    return scale * ((p.x - p.a) ** (p.alpha + 1.0) * lower + (p.b - p.x) ** (p.alpha + 1.0) * upper)
