"""Closed-form moments of ``|t^alpha - lambda|`` and their quadrature oracle.

    a1(α, λ)      = ∫_0^1 |t^α - λ| dt
    a2_s(α, λ, s) = ∫_0^1 |t^α - λ| t^s dt
    a3_s(α, λ, s) = ∫_0^1 |t^α - λ| (1 - t)^s dt
    a2_m(α, λ)    = ∫_0^1 |t^α - λ| t dt         (= a2_s(α, λ, 1))
    a3_m(α, λ)    = ∫_0^1 |t^α - λ| (1 - t) dt   (= a1 - a2_m)
"""

from __future__ import annotations

import math
from enum import Enum

import mpmath

from .specfun import beta, incomplete_beta

__all__ = ["Weight", "kink", "a1", "a2_s", "a3_s", "a2_m", "a3_m", "oracle_moment"]


class Weight(str, Enum):
    ONE = "one"
    T_POW = "t^s"
    ONE_MINUS_T_POW = "(1-t)^s"


def _check(alpha: float, lam: float, s: float | None = None) -> None:
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if s is not None and not 0.0 < s <= 1.0:
        raise ValueError(f"s must lie in (0, 1], got {s}")


def kink(alpha: float, lam: float) -> float:
    """``lam**(1/alpha)``, the zero of ``t^alpha - lam`` on [0, 1]."""
    if lam == 0.0:
        return 0.0
    return math.exp(math.log(lam) / alpha)


def _lam_pow(lam: float, expo: float) -> float:
    # continuous extension: the lambda-term vanishes at lambda = 0
    return 0.0 if lam == 0.0 else math.exp(expo * math.log(lam))


def a1(alpha: float, lam: float) -> float:
    _check(alpha, lam)
    return (2.0 * alpha * _lam_pow(lam, 1.0 + 1.0 / alpha) + 1.0) / (alpha + 1.0) - lam


def a2_s(alpha: float, lam: float, s: float) -> float:
    _check(alpha, lam, s)
    num = 2.0 * alpha * _lam_pow(lam, 1.0 + (s + 1.0) / alpha) + s + 1.0
    return num / ((s + 1.0) * (alpha + s + 1.0)) - lam / (s + 1.0)


def a3_s(alpha: float, lam: float, s: float) -> float:
    _check(alpha, lam, s)
    k = kink(alpha, lam)
    head = lam * (1.0 - 2.0 * (1.0 - k) ** (s + 1.0)) / (s + 1.0)
    return head + beta(alpha + 1.0, s + 1.0) - 2.0 * incomplete_beta(k, alpha + 1.0, s + 1.0)


def a2_m(alpha: float, lam: float) -> float:
    _check(alpha, lam)
    return (alpha * _lam_pow(lam, 1.0 + 2.0 / alpha) + 1.0) / (alpha + 2.0) - lam / 2.0


def a3_m(alpha: float, lam: float) -> float:
    _check(alpha, lam)
    return (
        (2.0 * alpha * _lam_pow(lam, 1.0 + 1.0 / alpha) + 1.0) / (alpha + 1.0)
        - (alpha * _lam_pow(lam, 1.0 + 2.0 / alpha) + 1.0) / (alpha + 2.0)
        - lam / 2.0
    )


def oracle_moment(alpha: float, lam: float, weight: Weight | str = Weight.ONE, s: float = 1.0) -> float:
    """Brute-force ``∫_0^1 |t^alpha - lam| w(t) dt`` split at the kink.

    Tanh-sinh quadrature at 30 significant digits on each smooth piece; the
    endpoint singularities of ``t^alpha`` and ``(1-t)^s`` are what tanh-sinh
    is built for.  Independent of every closed form in this module.
    """
    weight = Weight(weight)
    _check(alpha, lam, None if weight is Weight.ONE else s)
    with mpmath.workdps(30):
        al, lm, ss = mpmath.mpf(alpha), mpmath.mpf(lam), mpmath.mpf(s)
        if weight is Weight.ONE:
            w = lambda t: 1
        elif weight is Weight.T_POW:
            w = lambda t: t**ss
        else:
            w = lambda t: (1 - t) ** ss
        k = lm ** (1 / al) if lam > 0.0 else mpmath.mpf(0)
        total = mpmath.mpf(0)
        if k > 0:
            total += mpmath.quad(lambda t: (lm - t**al) * w(t), [0, k])
        if k < 1:
            total += mpmath.quad(lambda t: (t**al - lm) * w(t), [k, 1])
        return float(total)
