"""Sampled membership checks for convex, s-convex, m-convex and quasi-convex
functions, plus the built-in catalog of test functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .expr import Call, Const, Expr, check_derivative_consistency, evaluate_array, parse, to_source

__all__ = [
    "Membership",
    "FunctionSpec",
    "Sampler",
    "Verdict",
    "check_convex",
    "check_s_convex",
    "check_m_convex",
    "check_quasi_convex",
    "check_membership",
    "derivative_power",
    "catalog",
    "catalog_by_name",
    "derivative_report",
]

KINDS = ("convex", "s-convex", "m-convex", "quasi-convex")


@dataclass(frozen=True)
class Membership:
    kind: str
    param: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown convexity class {self.kind!r}")
        if self.kind in ("s-convex", "m-convex"):
            if self.param is None or not 0.0 < self.param <= 1.0:
                raise ValueError(f"{self.kind} needs a parameter in (0, 1], got {self.param}")
        elif self.param is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> "Membership":
        """``"convex"``, ``"quasi-convex"``, ``"s-convex(0.5)"`` or ``"m-convex(1)"``."""
        text = text.strip()
        if text.endswith(")") and "(" in text:
            kind, arg = text[:-1].split("(", 1)
            return cls(kind.strip(), float(arg))
        return cls(text)

    def __str__(self) -> str:
        return self.kind if self.param is None else f"{self.kind}({self.param:g})"


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    f: Expr
    fprime: Optional[Expr]
    domain: tuple[float, float]
    classes: tuple[Membership, ...] = ()
    M: Optional[float] = None

    def __post_init__(self):
        lo, hi = self.domain
        if not hi > lo:
            raise ValueError(f"{self.name}: degenerate domain {self.domain}")
        if self.M is not None and self.M < 0.0:
            raise ValueError(f"{self.name}: M must be nonnegative")

    @classmethod
    def from_strings(cls, name, f, fprime, domain, classes=(), M=None) -> "FunctionSpec":
        return cls(
            name=name,
            f=parse(f),
            fprime=parse(fprime) if fprime is not None else None,
            domain=(float(domain[0]), float(domain[1])),
            classes=tuple(c if isinstance(c, Membership) else Membership.parse(c) for c in classes),
            M=None if M is None else float(M),
        )

    def fv(self, xs) -> np.ndarray:
        return evaluate_array(self.f, xs)

    def dfv(self, xs) -> np.ndarray:
        if self.fprime is None:
            raise ValueError(f"{self.name}: no derivative declared")
        return evaluate_array(self.fprime, xs)

    def derivative_bound(self, lo: float | None = None, hi: float | None = None, n: int = 4097) -> float:
        """``M`` if declared, else the sampled max of ``|f'|`` on ``[lo, hi]``."""
        if self.M is not None:
            return self.M
        lo = self.domain[0] if lo is None else lo
        hi = self.domain[1] if hi is None else hi
        return float(np.max(np.abs(self.dfv(np.linspace(lo, hi, n)))))

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "f": to_source(self.f),
            "fprime": None if self.fprime is None else to_source(self.fprime),
            "domain": list(self.domain),
            "classes": [str(c) for c in self.classes],
        }
        if self.M is not None:
            out["M"] = self.M
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "FunctionSpec":
        return cls.from_strings(d["name"], d["f"], d.get("fprime"), d["domain"], d.get("classes", ()), d.get("M"))


def derivative_power(spec: FunctionSpec, q: float) -> FunctionSpec:
    """A FunctionSpec for ``|f'|^q``, used to check each theorem's hypothesis."""
    if spec.fprime is None:
        raise ValueError(f"{spec.name}: no derivative declared")
    g = Call("pow", (Call("abs", (spec.fprime,)), Const(float(q))))
    return FunctionSpec(f"|{spec.name}'|^{q:g}", g, None, spec.domain)


# --------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class Sampler:
    """Deterministic low-discrepancy triples in [0, 1]^3 plus the cube corners."""

    n: int = 10_000
    seed: int = 0

    def points(self) -> np.ndarray:
        return _sample_points(self.n, self.seed)


@lru_cache(maxsize=16)
def _sample_points(n: int, seed: int) -> np.ndarray:
    grid = np.array([0.0, 0.5, 1.0])
    corners = np.array(np.meshgrid(grid, grid, grid, indexing="ij")).reshape(3, -1).T
    pts = np.vstack([corners, qmc.Halton(d=3, scramble=True, seed=seed).random(n)])
    pts.flags.writeable = False
    return pts


@dataclass(frozen=True)
class Verdict:
    passed: bool
    kind: str
    witness: dict = field(default_factory=dict)
    lhs: float = math.nan
    rhs: float = math.nan

    def __bool__(self) -> bool:
        return self.passed


DEFAULT_SAMPLER = Sampler()
SLACK = 1e-9


def _first_violation(kind, lhs, rhs, tol, coords: dict[str, np.ndarray]) -> Verdict:
    bad = np.nonzero(lhs - rhs > tol)[0]
    if bad.size == 0:
        return Verdict(True, kind)
    i = int(bad[0])
    witness = {k: float(v[i]) for k, v in coords.items()}
    return Verdict(False, kind, witness, float(lhs[i]), float(rhs[i]))


def _interval(spec: FunctionSpec, interval) -> tuple[float, float]:
    lo, hi = spec.domain if interval is None else map(float, interval)
    if not (spec.domain[0] <= lo < hi <= spec.domain[1]):
        raise ValueError(f"{spec.name}: interval [{lo}, {hi}] not inside domain {spec.domain}")
    return lo, hi


def _combine(points: np.ndarray, lo: float, hi: float):
    x = lo + (hi - lo) * points[:, 0]
    y = lo + (hi - lo) * points[:, 1]
    return x, y, points[:, 2]


def check_s_convex(spec: FunctionSpec, s: float, sampler: Sampler = DEFAULT_SAMPLER, interval=None, tol: float = SLACK) -> Verdict:
    """``f(t x + (1-t) y) <= t^s f(x) + (1-t)^s f(y)``, s-convexity in the second sense."""
    if not 0.0 < s <= 1.0:
        raise ValueError(f"s must lie in (0, 1], got {s}")
    lo, hi = _interval(spec, interval)
    if lo < 0.0:
        raise ValueError(f"{spec.name}: s-convexity is defined on [0, inf), interval starts at {lo}")
    x, y, t = _combine(sampler.points(), lo, hi)
    u = 1.0 - t
    z = np.clip(t * x + u * y, lo, hi)
    lhs = spec.fv(z)
    rhs = t**s * spec.fv(x) + u**s * spec.fv(y)
    return _first_violation(f"s-convex({s:g})", lhs, rhs, tol, {"x": x, "y": y, "t": t})


def check_convex(spec: FunctionSpec, sampler: Sampler = DEFAULT_SAMPLER, interval=None, tol: float = SLACK) -> Verdict:
    lo, hi = _interval(spec, interval)
    x, y, t = _combine(sampler.points(), lo, hi)
    z = np.clip(t * x + (1.0 - t) * y, lo, hi)
    lhs = spec.fv(z)
    rhs = t * spec.fv(x) + (1.0 - t) * spec.fv(y)
    return _first_violation("convex", lhs, rhs, tol, {"x": x, "y": y, "t": t})


def check_m_convex(spec: FunctionSpec, m: float, sampler: Sampler = DEFAULT_SAMPLER, interval=None, tol: float = SLACK) -> Verdict:
    """``f(t x + m (1-t) y) <= t f(x) + m (1-t) f(y)`` on ``[0, b]``."""
    if not 0.0 < m <= 1.0:
        raise ValueError(f"m must lie in (0, 1], got {m}")
    lo, hi = _interval(spec, interval)
    if lo != 0.0:
        raise ValueError(f"{spec.name}: m-convexity needs an interval of the form [0, b], got [{lo}, {hi}]")
    x, y, t = _combine(sampler.points(), lo, hi)
    u = 1.0 - t
    z = np.clip(t * x + m * u * y, lo, hi)
    lhs = spec.fv(z)
    rhs = t * spec.fv(x) + m * u * spec.fv(y)
    return _first_violation(f"m-convex({m:g})", lhs, rhs, tol, {"x": x, "y": y, "t": t})


def check_quasi_convex(spec: FunctionSpec, sampler: Sampler = DEFAULT_SAMPLER, interval=None, tol: float = SLACK) -> Verdict:
    lo, hi = _interval(spec, interval)
    x, y, t = _combine(sampler.points(), lo, hi)
    z = np.clip(t * x + (1.0 - t) * y, lo, hi)
    lhs = spec.fv(z)
    rhs = np.maximum(spec.fv(x), spec.fv(y))
    return _first_violation("quasi-convex", lhs, rhs, tol, {"x": x, "y": y, "t": t})


def check_membership(spec: FunctionSpec, member: Membership, sampler: Sampler = DEFAULT_SAMPLER, interval=None) -> Verdict:
    if member.kind == "convex":
        return check_convex(spec, sampler, interval)
    if member.kind == "s-convex":
        return check_s_convex(spec, member.param, sampler, interval)
    if member.kind == "m-convex":
        return check_m_convex(spec, member.param, sampler, interval)
    return check_quasi_convex(spec, sampler, interval)


# --------------------------------------------------------------------------
# catalog

_CATALOG = [
    ("linear", "x", "1", (0.0, 2.0),
     ["convex", "s-convex(1)", "s-convex(0.5)", "m-convex(1)", "m-convex(0.5)", "quasi-convex"]),
    ("square", "x^2", "2*x", (0.0, 2.0),
     ["convex", "s-convex(1)", "m-convex(1)", "m-convex(0.5)", "quasi-convex"]),
    ("cube", "x^3", "3*x^2", (0.0, 1.5),
     ["convex", "s-convex(1)", "m-convex(1)", "m-convex(0.5)", "quasi-convex"]),
    ("exp", "exp(x)", "exp(x)", (0.0, 1.0),
     ["convex", "s-convex(1)", "m-convex(1)", "quasi-convex"]),
    ("pow1.5", "x^1.5", "1.5*x^0.5", (0.0, 2.0),
     ["convex", "s-convex(1)", "m-convex(0.5)", "quasi-convex"]),
    ("pow0.25", "x^0.25", "0.25*x^(-0.75)", (0.5, 2.0), ["s-convex(0.25)", "quasi-convex"]),
    ("pow0.5", "x^0.5", "0.5*x^(-0.5)", (0.5, 2.0), ["s-convex(0.5)", "quasi-convex"]),
    ("pow0.75", "x^0.75", "0.75*x^(-0.25)", (0.5, 2.0), ["s-convex(0.75)", "quasi-convex"]),
    # increasing with an inflection at 1: quasi-convex, not convex
    ("monotone_cubic", "(x-1)^3 + 1", "3*(x-1)^2", (0.0, 2.0), ["quasi-convex"]),
    # |f'| = x - x^2 peaks inside the interval: fails every hypothesis
    ("negcontrol", "x^2/2 - x^3/3", "x - x^2", (0.0, 1.0), []),
]


def catalog() -> list[FunctionSpec]:
    return [FunctionSpec.from_strings(*row) for row in _CATALOG]


def catalog_by_name() -> dict[str, FunctionSpec]:
    return {spec.name: spec for spec in catalog()}


def derivative_report(spec: FunctionSpec, n: int = 11):
    return check_derivative_consistency(spec.f, spec.fprime, spec.domain, n)
