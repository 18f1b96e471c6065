"""Config-driven sweeps: theorem verification, identity and coefficient suites,
catalog checks, CSV/JSON reports and plot data.

Exit codes: 0 all hold, 1 config error, 2 at least one genuine violation,
3 numerical-fault abort (the two S_f evaluations disagree).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from . import coeffs
from .bounds import CorollaryId, Family, corollary_consistency, hh_check, verify
from .convexity import FunctionSpec, Sampler, catalog, catalog_by_name, check_membership, derivative_report
from .expr import ExprSyntaxError
from .quadrature import QuadratureConfig
from .sfunc import InequalityParams, sf_direct, sf_identity_rhs, sf_m_direct, sf_m_identity_rhs

log = logging.getLogger(__name__)

SCHEMA = "v1"
CSV_COLUMNS = ["name", "family", "corollary", "alpha", "lambda", "xfrac", "q", "s", "m",
               "lhs", "rhs", "slack", "holds", "residual"]
EXIT_OK, EXIT_CONFIG, EXIT_VIOLATION, EXIT_FAULT = 0, 1, 2, 3
COROLLARY_ORDER = ["general"] + [c.value for c in CorollaryId]
FAMILY_ORDER = [f.value for f in Family]
PLOT_MODES = ("slack-vs-alpha", "slack-vs-lambda", "tightness-heatmap")


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


# --------------------------------------------------------------------------
# configuration


@dataclass
class Grid:
    alpha: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    lam: list[float] = field(default_factory=lambda: [0.0, 1.0 / 3.0, 0.5, 1.0])
    xfrac: list[float] = field(default_factory=lambda: [0.1, 0.5, 0.9])
    q: list[float] = field(default_factory=lambda: [1.0, 2.0, 3.0])
    s: list[float] = field(default_factory=lambda: [0.5, 1.0])
    m: list[float] = field(default_factory=lambda: [0.5, 1.0])


@dataclass
class Tolerances:
    agreement: float = 1e-8  # max |direct - identity| before a cell is a numerical fault
    abs: float = 1e-8
    rel: float = 1e-6


@dataclass
class IdentitySuite:
    cases: int = 500
    m_values: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])
    alpha_max: float = 3.0
    rtol: float = 1e-9


@dataclass
class SweepConfig:
    functions: list[FunctionSpec] = field(default_factory=catalog)
    intervals: dict[str, tuple[float, float]] = field(default_factory=dict)
    families: list[str] = field(default_factory=lambda: list(FAMILY_ORDER))
    corollaries: list[str] = field(default_factory=lambda: list(COROLLARY_ORDER))
    grid: Grid = field(default_factory=Grid)
    tolerances: Tolerances = field(default_factory=Tolerances)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    identity: IdentitySuite = field(default_factory=IdentitySuite)
    samples: int = 10_000
    seed: int = 0
    gating: bool = True
    out_dir: str = "out"
    format: str = "both"
    jobs: int = 1

    def interval(self, spec: FunctionSpec) -> tuple[float, float]:
        return self.intervals.get(spec.name, spec.domain)

    def metadata(self) -> dict:
        return {
            "schema": SCHEMA,
            "seed": self.seed,
            "samples": self.samples,
            "gating": self.gating,
            "tolerances": asdict(self.tolerances),
            "quadrature": asdict(self.quadrature),
            "families": self.families,
            "corollaries": self.corollaries,
            "grid": asdict(self.grid),
            "functions": [dict(s.to_dict(), interval=list(self.interval(s))) for s in self.functions],
        }


def _number_list(raw, path: str, check=None, what: str = "") -> list[float]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(path, "expected a non-empty list of numbers")
    out = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{path}[{i}]", f"expected a number, got {v!r}")
        if check is not None and not check(float(v)):
            raise ConfigError(f"{path}[{i}]", f"{v!r} violates {what}")
        out.append(float(v))
    return out


_GRID_RULES = {
    "alpha": (lambda v: v > 0.0, "alpha > 0"),
    "lambda": (lambda v: 0.0 <= v <= 1.0, "0 <= lambda <= 1"),
    "xfrac": (lambda v: 0.0 <= v <= 1.0, "0 <= xfrac <= 1"),
    "q": (lambda v: v >= 1.0, "q >= 1"),
    "s": (lambda v: 0.0 < v <= 1.0, "0 < s <= 1"),
    "m": (lambda v: 0.0 < v <= 1.0, "0 < m <= 1"),
}


def _parse_function(raw, path: str, known: dict[str, FunctionSpec]):
    if isinstance(raw, str):
        if raw not in known:
            raise ConfigError(path, f"unknown catalog function {raw!r}")
        return known[raw], None
    if not isinstance(raw, dict) or "name" not in raw:
        raise ConfigError(path, "expected a catalog name or an object with 'name'")
    interval = None
    if "interval" in raw:
        iv = _number_list(raw["interval"], f"{path}.interval")
        if len(iv) != 2 or not iv[0] < iv[1]:
            raise ConfigError(f"{path}.interval", "expected [a, b] with a < b")
        interval = (iv[0], iv[1])
    if "f" not in raw:
        if raw["name"] not in known:
            raise ConfigError(f"{path}.name", f"unknown catalog function {raw['name']!r}")
        spec = known[raw["name"]]
    else:
        for key in ("fprime", "domain"):
            if key not in raw:
                raise ConfigError(path, f"inline function needs {key!r}")
        try:
            spec = FunctionSpec.from_dict(raw)
        except ExprSyntaxError as exc:
            raise ConfigError(path, f"bad expression: {exc}") from exc
        except (ValueError, TypeError) as exc:
            raise ConfigError(path, str(exc)) from exc
    if interval is not None and not (spec.domain[0] <= interval[0] and interval[1] <= spec.domain[1]):
        raise ConfigError(f"{path}.interval", f"{interval} not inside domain {spec.domain}")
    return spec, interval


def config_from_dict(raw: dict) -> SweepConfig:
    if not isinstance(raw, dict):
        raise ConfigError("", "top level must be a JSON object")
    known = catalog_by_name()
    cfg = SweepConfig()
    allowed = {"functions", "families", "corollaries", "grid", "tolerances", "quadrature",
               "identity", "samples", "seed", "gating", "output", "jobs"}
    for key in raw:
        if key not in allowed:
            raise ConfigError(key, "unknown key")

    if "functions" in raw:
        if not isinstance(raw["functions"], list) or not raw["functions"]:
            raise ConfigError("functions", "expected a non-empty list")
        cfg.functions, cfg.intervals = [], {}
        for i, entry in enumerate(raw["functions"]):
            spec, interval = _parse_function(entry, f"functions[{i}]", known)
            if any(s.name == spec.name for s in cfg.functions):
                raise ConfigError(f"functions[{i}]", f"duplicate function {spec.name!r}")
            cfg.functions.append(spec)
            if interval is not None:
                cfg.intervals[spec.name] = interval

    if "families" in raw:
        fams = raw["families"]
        if not isinstance(fams, list) or not fams:
            raise ConfigError("families", "expected a non-empty list")
        for i, fam in enumerate(fams):
            if fam not in FAMILY_ORDER:
                raise ConfigError(f"families[{i}]", f"unknown family {fam!r}; choose from {FAMILY_ORDER}")
        cfg.families = list(fams)

    if "corollaries" in raw:
        cors = raw["corollaries"]
        if not isinstance(cors, list) or not cors:
            raise ConfigError("corollaries", "expected a non-empty list")
        for i, c in enumerate(cors):
            if c not in COROLLARY_ORDER:
                raise ConfigError(f"corollaries[{i}]", f"unknown corollary {c!r}; choose from {COROLLARY_ORDER}")
        cfg.corollaries = list(cors)

    if "grid" in raw:
        g = raw["grid"]
        if not isinstance(g, dict):
            raise ConfigError("grid", "expected an object")
        for key, val in g.items():
            if key not in _GRID_RULES:
                raise ConfigError(f"grid.{key}", "unknown grid axis")
            rule, what = _GRID_RULES[key]
            setattr(cfg.grid, "lam" if key == "lambda" else key, _number_list(val, f"grid.{key}", rule, what))

    if "tolerances" in raw:
        t = raw["tolerances"]
        if not isinstance(t, dict):
            raise ConfigError("tolerances", "expected an object")
        for key, val in t.items():
            if key not in ("agreement", "abs", "rel"):
                raise ConfigError(f"tolerances.{key}", "unknown tolerance")
            if isinstance(val, bool) or not isinstance(val, (int, float)) or val < 0:
                raise ConfigError(f"tolerances.{key}", "expected a nonnegative number")
            setattr(cfg.tolerances, key, float(val))

    if "quadrature" in raw:
        qd = raw["quadrature"]
        if not isinstance(qd, dict):
            raise ConfigError("quadrature", "expected an object")
        try:
            cfg.quadrature = QuadratureConfig(**qd)
        except (TypeError, ValueError) as exc:
            raise ConfigError("quadrature", str(exc)) from exc

    if "identity" in raw:
        idn = raw["identity"]
        if not isinstance(idn, dict):
            raise ConfigError("identity", "expected an object")
        for key, val in idn.items():
            if key == "m_values":
                cfg.identity.m_values = _number_list(val, "identity.m_values", *_GRID_RULES["m"])
            elif key == "cases":
                if not isinstance(val, int) or val < 1:
                    raise ConfigError("identity.cases", "expected a positive integer")
                cfg.identity.cases = val
            elif key in ("alpha_max", "rtol"):
                if isinstance(val, bool) or not isinstance(val, (int, float)) or val <= 0:
                    raise ConfigError(f"identity.{key}", "expected a positive number")
                setattr(cfg.identity, key, float(val))
            else:
                raise ConfigError(f"identity.{key}", "unknown key")

    for key in ("samples", "seed", "jobs"):
        if key in raw:
            val = raw[key]
            if isinstance(val, bool) or not isinstance(val, int) or val < (0 if key == "seed" else 1):
                raise ConfigError(key, "expected a positive integer" if key != "seed" else "expected an integer >= 0")
            setattr(cfg, key, val)
    if "gating" in raw:
        if not isinstance(raw["gating"], bool):
            raise ConfigError("gating", "expected true or false")
        cfg.gating = raw["gating"]
    if "output" in raw:
        out = raw["output"]
        if not isinstance(out, dict):
            raise ConfigError("output", "expected an object")
        if "dir" in out:
            cfg.out_dir = str(out["dir"])
        if "format" in out:
            if out["format"] not in ("csv", "json", "both"):
                raise ConfigError("output.format", "expected csv, json or both")
            cfg.format = out["format"]
    return cfg


def load_config(path: str | Path) -> SweepConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", f"invalid JSON: {exc.msg}") from exc
    return config_from_dict(raw)


# --------------------------------------------------------------------------
# theorem sweep


@dataclass(frozen=True)
class Cell:
    spec: FunctionSpec
    family: str
    corollary: str
    a: float
    b: float
    alpha: float
    lam: float
    xfrac: float
    q: float
    s: Optional[float]
    m: Optional[float]

    def key(self) -> tuple:
        return (
            self.spec.name,
            FAMILY_ORDER.index(self.family),
            COROLLARY_ORDER.index(self.corollary),
            self.alpha, self.lam, self.xfrac, self.q,
            -1.0 if self.s is None else self.s,
            -1.0 if self.m is None else self.m,
        )

    def params(self) -> InequalityParams:
        x = self.a + self.xfrac * (self.b - self.a)
        return InequalityParams(self.a, self.b, x, self.lam, self.alpha, self.q, self.s, self.m)


@dataclass(frozen=True)
class ReportRow:
    name: str
    family: str
    corollary: str
    alpha: float
    lam: float
    xfrac: float
    q: float
    s: Optional[float]
    m: Optional[float]
    lhs: float
    rhs: float
    slack: float
    holds: str  # true | false | skip | fault
    residual: float
    reason: str = ""

    def __post_init__(self):
        # plain floats keep CSV, JSON and plot text free of numpy reprs
        for name in ("alpha", "lam", "xfrac", "q", "s", "m", "lhs", "rhs", "slack", "residual"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, float(v))

    def csv_values(self) -> list[str]:
        return [self.name, self.family, self.corollary] + [
            _fmt(v) for v in (self.alpha, self.lam, self.xfrac, self.q, self.s, self.m,
                              self.lhs, self.rhs, self.slack)
        ] + [self.holds, _fmt(self.residual)]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}


def _fmt(v) -> str:
    if v is None:
        return ""
    v = float(v)
    return "" if math.isnan(v) else repr(v)


def build_cells(cfg: SweepConfig) -> list[Cell]:
    g = cfg.grid
    cells = []
    for spec in cfg.functions:
        a, b = cfg.interval(spec)
        for fam in cfg.families:
            params = g.s if fam == Family.S_CONVEX.value else g.m if fam == Family.M_CONVEX.value else [None]
            for cor in cfg.corollaries:
                if cor in (CorollaryId.SIMPSON.value, CorollaryId.MIDPOINT.value):
                    lams, xfracs = [1.0 / 3.0 if cor == "simpson" else 0.0], [0.5]
                elif cor == CorollaryId.TRAPEZOID.value:
                    lams, xfracs = [1.0], g.xfrac
                elif cor == CorollaryId.OSTROWSKI.value:
                    lams, xfracs = [0.0], g.xfrac
                else:
                    lams, xfracs = g.lam, g.xfrac
                for al, lam, xf, q, par in itertools.product(g.alpha, lams, xfracs, g.q, params):
                    s = par if fam == Family.S_CONVEX.value else None
                    m = par if fam == Family.M_CONVEX.value else None
                    cells.append(Cell(spec, fam, cor, a, b, al, lam, xf, q, s, m))
    return sorted(set(cells), key=Cell.key)


def evaluate_cell(cell: Cell, cfg: SweepConfig) -> ReportRow:
    base = dict(name=cell.spec.name, family=cell.family, corollary=cell.corollary, alpha=cell.alpha,
                lam=cell.lam, xfrac=cell.xfrac, q=cell.q, s=cell.s, m=cell.m)
    try:
        p = cell.params()
    except ValueError as exc:
        return ReportRow(**base, lhs=math.nan, rhs=math.nan, slack=math.nan, holds="skip",
                         residual=math.nan, reason=str(exc))
    t = cfg.tolerances
    probe = verify(
        cell.spec, cell.family, p,
        corollary=None if cell.corollary == "general" else cell.corollary,
        tol=math.inf, cfg=cfg.quadrature, sampler=Sampler(cfg.samples, cfg.seed),
        gate=cfg.gating, agreement_tol=t.agreement,
    )
    if probe.status == "skip" or math.isnan(probe.rhs):
        return ReportRow(**base, lhs=probe.lhs, rhs=probe.rhs, slack=probe.slack,
                         holds="fault" if probe.status == "fault" else "skip",
                         residual=probe.residual, reason=probe.reason)
    tol = t.abs + t.rel * abs(probe.rhs)
    reason = probe.reason
    if probe.status == "fault":
        holds = "fault"
    elif probe.slack >= -tol:
        holds = "true"
    else:
        holds, reason = "false", f"lhs exceeds rhs by {-probe.slack:.3e}"
    return ReportRow(**base, lhs=probe.lhs, rhs=probe.rhs, slack=probe.slack, holds=holds,
                     residual=probe.residual, reason=reason)


def _evaluate_chunk(args) -> list[ReportRow]:
    cells, cfg = args
    return [evaluate_cell(c, cfg) for c in cells]


def run(cfg: SweepConfig, write: bool = True) -> list[ReportRow]:
    """Evaluate every cell of the sweep; rows come back in stable key order."""
    cells = build_cells(cfg)
    log.info("sweep: %d cells, %d job(s)", len(cells), cfg.jobs)
    if cfg.jobs > 1 and len(cells) > 1:
        chunks = [cells[i::cfg.jobs] for i in range(cfg.jobs)]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = [r for part in pool.map(_evaluate_chunk, [(c, cfg) for c in chunks]) for r in part]
    else:
        rows = _evaluate_chunk((cells, cfg))
    order = {c: i for i, c in enumerate(c.key() for c in cells)}
    rows.sort(key=lambda r: order[_row_key(r)])
    if write:
        write_report(rows, cfg)
    return rows


def _row_key(r: ReportRow) -> tuple:
    return (r.name, FAMILY_ORDER.index(r.family), COROLLARY_ORDER.index(r.corollary), r.alpha, r.lam,
            r.xfrac, r.q, -1.0 if r.s is None else r.s, -1.0 if r.m is None else r.m)


def exit_code(rows: Iterable[ReportRow]) -> int:
    status = {r.holds for r in rows}
    if "fault" in status:
        return EXIT_FAULT
    if "false" in status:
        return EXIT_VIOLATION
    return EXIT_OK


def summarize(rows: Sequence[ReportRow]) -> dict:
    counts = {k: sum(r.holds == k for r in rows) for k in ("true", "false", "skip", "fault")}
    evaluated = [r for r in rows if r.holds in ("true", "false")]
    return {
        "cells": len(rows),
        "counts": counts,
        "max_residual": max((r.residual for r in evaluated), default=None),
        "min_slack": min((r.slack for r in evaluated), default=None),
        "exit_code": exit_code(rows),
    }


def rows_to_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    buf.write(f"# fracineq report schema {SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_values())
    return buf.getvalue()


def _write_table(out: Path, stem: str, header: list[str], rows: list[list], fmt: str, payload: dict) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    if fmt in ("csv", "both"):
        path = out / f"{stem}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            fh.write(f"# fracineq {stem} schema {SCHEMA}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        paths.append(path)
    if fmt in ("json", "both"):
        path = out / f"{stem}.json"
        path.write_text(json.dumps(payload, indent=2, allow_nan=False, default=_json_default) + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def _json_default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"not JSON serialisable: {type(o)!r}")


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def write_report(rows: Sequence[ReportRow], cfg: SweepConfig) -> list[Path]:
    out = Path(cfg.out_dir)
    payload = {
        "meta": cfg.metadata(),
        "summary": {k: _clean(v) for k, v in summarize(rows).items()},
        "rows": [{k: _clean(v) for k, v in r.to_dict().items()} for r in rows],
    }
    return _write_table(out, "report", CSV_COLUMNS, [r.csv_values() for r in rows], cfg.format, payload)


# --------------------------------------------------------------------------
# plot data


def emit_plot_data(rows: Sequence[ReportRow], mode: str, out_dir: str | Path) -> list[Path]:
    """Whitespace-separated columns, one file per (function, family)."""
    if mode not in PLOT_MODES:
        raise ValueError(f"unknown plot mode {mode!r}; choose from {PLOT_MODES}")
    selected = [r for r in rows if r.corollary == "general" and r.holds in ("true", "false")]
    if not selected:
        raise ValueError("no evaluated general-bound rows to plot")
    groups: dict[tuple[str, str], list[ReportRow]] = {}
    for r in selected:
        groups.setdefault((r.name, r.family), []).append(r)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for (name, fam), grp in groups.items():
        path = out / f"{_safe(name)}__{fam}__{mode}.dat"
        if mode == "tightness-heatmap":
            header = "# alpha lambda min_slack min_relative_slack n"
            keyf = lambda r: (r.alpha, r.lam)
        else:
            axis = "alpha" if mode == "slack-vs-alpha" else "lambda"
            header = f"# {axis} min_slack max_slack min_relative_slack n"
            keyf = (lambda r: (r.alpha,)) if axis == "alpha" else (lambda r: (r.lam,))
        buckets: dict[tuple, list[ReportRow]] = {}
        for r in grp:
            buckets.setdefault(keyf(r), []).append(r)
        lines = [header]
        for k in sorted(buckets):
            b = buckets[k]
            slacks = [r.slack for r in b]
            rel = [r.slack / r.rhs for r in b if r.rhs > 0.0]
            relmin = repr(min(rel)) if rel else "nan"
            cols = [repr(v) for v in k] + [repr(min(slacks))]
            if mode != "tightness-heatmap":
                cols.append(repr(max(slacks)))
            cols += [relmin, str(len(b))]
            lines.append(" ".join(cols))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in name)


# --------------------------------------------------------------------------
# identity and coefficient suites


IDENTITY_COLUMNS = ["name", "variant", "alpha", "lambda", "a", "b", "x", "m", "direct", "identity", "residual", "pass"]


def identity_cases(cfg: SweepConfig) -> list[tuple[FunctionSpec, str, InequalityParams]]:
    """Randomised (function, variant, params) draws, fully determined by the seed.

    Variant ``"m"`` draws the scaled interval ``[m a, m b]`` inside the
    function's domain, so only points where f is declared are touched.
    """
    rng = np.random.default_rng(cfg.seed)
    funcs = [s for s in cfg.functions if s.fprime is not None]
    if not funcs:
        raise ConfigError("functions", "identity suite needs functions with a derivative")
    out = []
    idn = cfg.identity
    for i in range(idn.cases):
        for variant in ("plain", "m"):
            spec = funcs[int(rng.integers(len(funcs)))]
            lo, hi = cfg.interval(spec)
            alpha = idn.alpha_max * (1.0 - rng.random())  # (0, alpha_max]
            lam = float(rng.random())
            u, v = np.sort(rng.random(2))
            if v - u < 1e-3:
                u, v = max(0.0, u - 5e-4), min(1.0, v + 5e-4)
            A, B = lo + (hi - lo) * u, lo + (hi - lo) * v
            X = A + (B - A) * (0.02 + 0.96 * rng.random())
            if variant == "plain":
                out.append((spec, variant, InequalityParams(A, B, X, lam, alpha)))
            else:
                m = idn.m_values[i % len(idn.m_values)]
                out.append((spec, variant, InequalityParams(A / m, B / m, X / m, lam, alpha, m=m)))
    return out


def run_identity(cfg: SweepConfig, write: bool = True) -> list[dict]:
    rows = []
    for spec, variant, p in identity_cases(cfg):
        if variant == "plain":
            d, r = sf_direct(spec, p, cfg.quadrature), sf_identity_rhs(spec, p, cfg.quadrature)
        else:
            d, r = sf_m_direct(spec, None, p, cfg.quadrature), sf_m_identity_rhs(spec, None, p, cfg.quadrature)
        d, r = float(d), float(r)
        res = abs(d - r)
        rows.append(dict(name=spec.name, variant=variant, alpha=p.alpha, **{"lambda": p.lam}, a=p.a, b=p.b, x=p.x,
                         m=p.m, direct=d, identity=r, residual=res,
                         **{"pass": bool(res <= cfg.identity.rtol * (1.0 + abs(d)))}))
    if write:
        table = [[_cell(row[c]) for c in IDENTITY_COLUMNS] for row in rows]
        payload = {"meta": cfg.metadata() | {"identity": asdict(cfg.identity)},
                   "summary": {"cases": len(rows), "failures": sum(not r["pass"] for r in rows),
                               "max_residual": max(r["residual"] for r in rows)},
                   "rows": rows}
        _write_table(Path(cfg.out_dir), "identity", IDENTITY_COLUMNS, table, cfg.format, payload)
    return rows


COEFF_GRID = dict(
    alpha=[0.25, 0.5, 1.0, 1.5, 2.0, 3.0],
    lam=[0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0],
    s=[0.25, 0.5, 0.75, 1.0],
)
COEFF_COLUMNS = ["coeff", "alpha", "lambda", "s", "closed", "reference", "diff", "tol", "pass"]


def run_coeffs(cfg: SweepConfig, write: bool = True) -> list[dict]:
    """Closed forms against the tanh-sinh oracle, plus the exact cross-relations."""
    rows = []

    def add(name, al, lam, s, closed, ref, tol):
        diff = abs(closed - ref)
        rows.append(dict(coeff=name, alpha=al, **{"lambda": lam}, s=s, closed=closed, reference=ref,
                         diff=diff, tol=tol, **{"pass": diff <= tol}))

    W = coeffs.Weight
    for al, lam in itertools.product(COEFF_GRID["alpha"], COEFF_GRID["lam"]):
        add("a1", al, lam, None, coeffs.a1(al, lam), coeffs.oracle_moment(al, lam, W.ONE), 1e-10)
        a2m, a3m = coeffs.a2_m(al, lam), coeffs.a3_m(al, lam)
        add("a2_m", al, lam, None, a2m, coeffs.oracle_moment(al, lam, W.T_POW, 1.0), 1e-10)
        add("a3_m", al, lam, None, a3m, coeffs.oracle_moment(al, lam, W.ONE_MINUS_T_POW, 1.0), 1e-10)
        add("a1=a2_m+a3_m", al, lam, None, coeffs.a1(al, lam), a2m + a3m, 1e-12)
        add("a2_s(s=1)=a2_m", al, lam, 1.0, coeffs.a2_s(al, lam, 1.0), a2m, 1e-12)
        add("a3_s(s=1)=a3_m", al, lam, 1.0, coeffs.a3_s(al, lam, 1.0), a3m, 1e-12)
        for s in COEFF_GRID["s"]:
            add("a2_s", al, lam, s, coeffs.a2_s(al, lam, s), coeffs.oracle_moment(al, lam, W.T_POW, s), 1e-10)
            add("a3_s", al, lam, s, coeffs.a3_s(al, lam, s),
                coeffs.oracle_moment(al, lam, W.ONE_MINUS_T_POW, s), 1e-10)
    if write:
        table = [[_cell(row[c]) for c in COEFF_COLUMNS] for row in rows]
        payload = {"meta": {"schema": SCHEMA, "grid": COEFF_GRID},
                   "summary": {"checks": len(rows), "failures": sum(not r["pass"] for r in rows),
                               "max_diff": max(r["diff"] for r in rows)},
                   "rows": rows}
        _write_table(Path(cfg.out_dir), "coeffs", COEFF_COLUMNS, table, cfg.format, payload)
    return rows


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, int, np.floating)):
        return _fmt(v)
    return "" if v is None else str(v)


CATALOG_COLUMNS = ["name", "f", "fprime", "a", "b", "class", "pass", "detail"]


def run_catalog(cfg: SweepConfig, write: bool = True) -> list[dict]:
    """Every declared class, the derivative check and the Hermite-Hadamard check."""
    sampler = Sampler(cfg.samples, cfg.seed)
    rows = []
    for spec in cfg.functions:
        d = spec.to_dict()
        base = dict(name=spec.name, f=d["f"], fprime=d["fprime"], a=spec.domain[0], b=spec.domain[1])
        if spec.fprime is not None:
            rep = derivative_report(spec)
            rows.append(base | {"class": "derivative", "pass": rep.passed,
                                "detail": f"max deviation {rep.max_deviation:.3e}"})
        for member in spec.classes:
            v = check_membership(spec, member, sampler)
            rows.append(base | {"class": str(member), "pass": v.passed,
                                "detail": "" if v.passed else f"witness {v.witness}"})
        if any(m.kind == "convex" for m in spec.classes):
            left, right = hh_check(spec, cfg=cfg.quadrature, sampler=sampler)
            rows.append(base | {"class": "hermite-hadamard", "pass": left.holds and right.holds,
                                "detail": f"{left.lhs!r} <= {left.rhs!r} <= {right.rhs!r}"})
    if write:
        table = [[_cell(row[c]) for c in CATALOG_COLUMNS] for row in rows]
        payload = {"meta": {"schema": SCHEMA, "samples": cfg.samples, "seed": cfg.seed},
                   "functions": [s.to_dict() for s in cfg.functions], "rows": rows}
        _write_table(Path(cfg.out_dir), "catalog", CATALOG_COLUMNS, table, cfg.format, payload)
    return rows


COROLLARY_COLUMNS = ["name", "family", "corollary", "alpha", "xfrac", "q", "param", "general", "printed", "diff", "finding"]


def run_corollary_checks(cfg: SweepConfig, tol: float = 1e-10) -> list[dict]:
    """Specialised general bound against each corollary's own formula.

    A row with ``finding`` set keeps both values; nothing is reconciled.
    """
    g = cfg.grid
    rows = []
    for spec in cfg.functions:
        if spec.fprime is None:
            continue
        a, b = cfg.interval(spec)
        for fam in cfg.families:
            params = g.s if fam == Family.S_CONVEX.value else g.m if fam == Family.M_CONVEX.value else [None]
            for cid in CorollaryId:
                for al, xf, q, par in itertools.product(g.alpha, g.xfrac, g.q, params):
                    p = InequalityParams(a, b, a + xf * (b - a), 0.0, al, q,
                                         par if fam == Family.S_CONVEX.value else None,
                                         par if fam == Family.M_CONVEX.value else None)
                    chk = corollary_consistency(cid, fam, spec, p, tol=tol)
                    rows.append(dict(name=spec.name, family=fam, corollary=cid.value, alpha=al, xfrac=xf, q=q,
                                     param=par, general=chk.general, printed=chk.printed, diff=chk.diff,
                                     finding=chk.finding))
    return rows
