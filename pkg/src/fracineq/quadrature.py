"""Composite Gauss-Legendre on geometrically graded panels.

Every numeric integral in the package goes through :func:`integrate`, so one
:class:`QuadratureConfig` controls the whole error budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

__all__ = ["QuadratureConfig", "gauss_legendre", "graded_breakpoints", "integrate", "unit_breakpoints"]


@dataclass(frozen=True)
class QuadratureConfig:
    """``panels`` graded panels are laid toward each end of the unit interval.

    Panel widths shrink geometrically by ``ratio`` toward the endpoint, so an
    algebraic endpoint singularity ends up confined to a panel of width
    ``ratio**(panels-1) / 2``.
    """

    nodes: int = 64
    panels: int = 8
    ratio: float = 0.1
    tol: float = 1e-11

    def __post_init__(self):
        if self.nodes < 8:
            raise ValueError("nodes must be >= 8")
        if self.panels < 1:
            raise ValueError("panels must be >= 1")
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("ratio must lie in (0, 1)")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")

    def refined(self) -> "QuadratureConfig":
        return QuadratureConfig(self.nodes, 2 * self.panels, self.ratio, self.tol)


DEFAULT_QUAD = QuadratureConfig()


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@lru_cache(maxsize=256)
def _unit_breaks(panels: int, ratio: float) -> np.ndarray:
    inner = 0.5 * ratio ** np.arange(panels - 1, 0, -1)
    left = np.concatenate(([0.0], inner, [0.5]))
    out = np.concatenate((left, 1.0 - left[-2::-1]))
    out.flags.writeable = False
    return out


def unit_breakpoints(cfg: QuadratureConfig, extra: Iterable[float] = ()) -> np.ndarray:
    """Breakpoints on [0, 1] graded toward both ends, plus any ``extra`` cuts."""
    base = _unit_breaks(cfg.panels, cfg.ratio)
    extra = [float(e) for e in extra if 0.0 < e < 1.0]
    if not extra:
        return base
    return np.unique(np.concatenate((base, extra)))


def graded_breakpoints(lo: float, hi: float, cfg: QuadratureConfig, extra: Iterable[float] = ()) -> np.ndarray:
    t = unit_breakpoints(cfg, ((e - lo) / (hi - lo) for e in extra))
    return lo + (hi - lo) * t


def _nodes(breaks: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = gauss_legendre(n)
    lo, hi = breaks[:-1], breaks[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return pts, wts


def integrate(
    fun: Callable[[np.ndarray], np.ndarray],
    breaks: np.ndarray,
    nodes: int,
) -> float:
    """Integrate a vectorised ``fun`` over ``[breaks[0], breaks[-1]]``."""
    breaks = np.asarray(breaks, dtype=np.float64)
    keep = np.concatenate(([True], np.diff(breaks) > 0.0))
    breaks = breaks[keep]
    if breaks.size < 2:
        return 0.0
    pts, wts = _nodes(breaks, nodes)
    return float(np.dot(wts, fun(pts)))


def integrate_unit(
    fun: Callable[[np.ndarray], np.ndarray],
    cfg: QuadratureConfig = DEFAULT_QUAD,
    extra: Iterable[float] = (),
) -> float:
    """Integrate over [0, 1] on the graded mesh of ``cfg``."""
    return integrate(fun, unit_breakpoints(cfg, extra), cfg.nodes)
