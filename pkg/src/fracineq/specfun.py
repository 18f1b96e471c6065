"""Gamma, complete Beta and the (non-regularized) incomplete Beta function."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

__all__ = ["SpecFunConfig", "gamma", "beta", "incomplete_beta"]

_SAFE_ARG = 50.0


@dataclass(frozen=True)
class SpecFunConfig:
    rtol: float = 1e-15
    max_iter: int = 500

    def __post_init__(self):
        if not 0.0 < self.rtol <= 1e-6:
            raise ValueError("rtol must lie in (0, 1e-6]")
        if self.max_iter < 64:
            raise ValueError("max_iter must be >= 64")


DEFAULT = SpecFunConfig()


def _check_positive(**kw: float) -> None:
    for name, v in kw.items():
        if not v > 0.0:
            raise ValueError(f"{name} must be positive, got {v}")
        if v > _SAFE_ARG:
            warnings.warn(f"{name}={v} outside the calibrated range (0, {_SAFE_ARG}]", stacklevel=3)


def gamma(x: float) -> float:
    _check_positive(x=x)
    return math.gamma(x)


def beta(x: float, y: float) -> float:
    _check_positive(x=x, y=y)
    if x + y < 170.0:
        return math.gamma(x) * math.gamma(y) / math.gamma(x + y)
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def _beta_cf(z: float, a: float, b: float, cfg: SpecFunConfig) -> float:
    # Modified Lentz evaluation of the standard continued fraction for I_z(a, b).
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * z / qap
    d = tiny if abs(d) < tiny else d
    d = 1.0 / d
    h = d
    for m in range(1, cfg.max_iter + 1):
        m2 = 2 * m
        num = m * (b - m) * z / ((qam + m2) * (a + m2))
        d = 1.0 + num * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + num / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        num = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2))
        d = 1.0 + num * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + num / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < cfg.rtol:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (z={z}, a={a}, b={b})")


def _front(z: float, a: float, b: float) -> float:
    return math.exp(a * math.log(z) + b * math.log1p(-z))


def incomplete_beta(z: float, x: float, y: float, cfg: SpecFunConfig = DEFAULT) -> float:
    """``∫_0^z t^(x-1) (1-t)^(y-1) dt`` (not divided by ``beta(x, y)``)."""
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    _check_positive(x=x, y=y)
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return beta(x, y)
    if z < (x + 1.0) / (x + y + 2.0):
        return _front(z, x, y) * _beta_cf(z, x, y, cfg) / x
    w = 1.0 - z
    return beta(x, y) - _front(w, y, x) * _beta_cf(w, y, x, cfg) / y
