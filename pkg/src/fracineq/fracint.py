"""Riemann-Liouville fractional integrals.

The weakly singular kernel is removed exactly: for the left-sided integral,
``t = x - (x - a) u**(1/alpha)`` turns

    (1/Gamma(alpha)) ∫_a^x (x - t)^(alpha-1) f(t) dt

into ``(x - a)^alpha / Gamma(alpha + 1) * ∫_0^1 f(x - (x - a) u^(1/alpha)) du``,
whose integrand is bounded for continuous ``f``.  The right-sided integral is
the mirror image.
"""

from __future__ import annotations

import math
from typing import Callable, Union

import numpy as np

from .expr import Expr, compile_expr
from .quadrature import DEFAULT_QUAD, QuadratureConfig, integrate_unit

__all__ = ["left_rl", "right_rl", "paper_pair"]

Integrand = Union[Expr, Callable[[np.ndarray], np.ndarray]]


def _vectorised(f: Integrand) -> Callable[[np.ndarray], np.ndarray]:
    return f if callable(f) else compile_expr(f)


def _check_alpha(alpha: float) -> None:
    if not alpha > 0.0:
        raise ValueError(f"order alpha must be positive, got {alpha}")


def left_rl(f: Integrand, alpha: float, a: float, x: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``J_{a+}^alpha f(x)``, requires ``x > a``."""
    _check_alpha(alpha)
    if not x > a:
        raise ValueError(f"left-sided integral needs x > a (a={a}, x={x})")
    fv = _vectorised(f)
    span = x - a
    inv = 1.0 / alpha
    val = integrate_unit(lambda u: fv(x - span * u**inv), cfg)
    return span**alpha / math.gamma(alpha + 1.0) * val


def right_rl(f: Integrand, alpha: float, b: float, x: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``J_{b-}^alpha f(x)``, requires ``x < b``."""
    _check_alpha(alpha)
    if not x < b:
        raise ValueError(f"right-sided integral needs x < b (b={b}, x={x})")
    fv = _vectorised(f)
    span = b - x
    inv = 1.0 / alpha
    val = integrate_unit(lambda u: fv(x + span * u**inv), cfg)
    return span**alpha / math.gamma(alpha + 1.0) * val


def paper_pair(
    f: Integrand, alpha: float, a: float, b: float, x: float, cfg: QuadratureConfig = DEFAULT_QUAD
) -> tuple[float, float]:
    """The pair ``(J_{x-}^alpha f(a), J_{x+}^alpha f(b))`` used by the S_f operator.

    The subscript is the fixed limit and the argument the evaluation point::

        J_{x-}^alpha f(a) = (1/Gamma(alpha)) ∫_a^x (t - a)^(alpha-1) f(t) dt
        J_{x+}^alpha f(b) = (1/Gamma(alpha)) ∫_x^b (b - t)^(alpha-1) f(t) dt

    A member whose interval collapses (``x == a`` or ``x == b``) is 0.
    """
    _check_alpha(alpha)
    if not a <= x <= b:
        raise ValueError(f"x={x} outside [{a}, {b}]")
    lower = right_rl(f, alpha, x, a, cfg) if x > a else 0.0
    upper = left_rl(f, alpha, x, b, cfg) if x < b else 0.0
    return lower, upper
