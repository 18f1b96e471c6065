"""Command-line entry point: ``fracineq <verb> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import harness
from .harness import EXIT_CONFIG, EXIT_OK, EXIT_VIOLATION, ConfigError, SweepConfig

VERBS = ("verify", "identity", "coeffs", "catalog", "plot")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracineq",
        description="Numerical verification of fractional Hermite-Hadamard type inequalities.",
    )
    parser.add_argument("verb", choices=VERBS, help="what to run")
    parser.add_argument("--config", type=Path, help="JSON sweep configuration (defaults to the built-in sweep)")
    parser.add_argument("--out", type=Path, help="output directory (overrides the config)")
    parser.add_argument("--seed", type=int, help="sampler and identity-suite seed")
    parser.add_argument("--tol", type=float, help="agreement tolerance between the two S_f evaluations")
    parser.add_argument("--format", choices=("csv", "json", "both"), help="report format")
    parser.add_argument("--jobs", type=int, help="worker processes for the verify sweep")
    parser.add_argument("--mode", choices=harness.PLOT_MODES, action="append",
                        help="plot data to emit (repeatable; default all)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _load(args) -> SweepConfig:
    cfg = harness.load_config(args.config) if args.config else SweepConfig()
    if args.out is not None:
        cfg.out_dir = str(args.out)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed", "expected an integer >= 0")
        cfg.seed = args.seed
    if args.tol is not None:
        if not args.tol >= 0.0:
            raise ConfigError("--tol", "expected a nonnegative number")
        cfg.tolerances.agreement = args.tol
    if args.format is not None:
        cfg.format = args.format
    if args.jobs is not None:
        if args.jobs < 1:
            raise ConfigError("--jobs", "expected a positive integer")
        cfg.jobs = args.jobs
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.verb in ("verify", "plot"):
        rows = harness.run(cfg, write=args.verb == "verify")
        summary = harness.summarize(rows)
        c = summary["counts"]
        print(f"{summary['cells']} cells: {c['true']} hold, {c['false']} violated, "
              f"{c['skip']} skipped, {c['fault']} faults; max residual {summary['max_residual']}")
        for r in rows:
            if r.holds in ("false", "fault"):
                print(f"  {r.holds}: {r.name} {r.family} {r.corollary} alpha={r.alpha} lambda={r.lam} "
                      f"xfrac={r.xfrac} q={r.q} s={r.s} m={r.m} {r.reason}")
        if args.verb == "plot":
            out = Path(cfg.out_dir) / "plots"
            for mode in args.mode or harness.PLOT_MODES:
                try:
                    paths = harness.emit_plot_data(rows, mode, out)
                except ValueError as exc:
                    print(f"plot error: {exc}", file=sys.stderr)
                    return EXIT_CONFIG
                print(f"{mode}: {len(paths)} file(s) in {out}")
        return summary["exit_code"]

    if args.verb == "identity":
        try:
            rows = harness.run_identity(cfg)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        bad = [r for r in rows if not r["pass"]]
        print(f"{len(rows)} identity cases, {len(bad)} failures, "
              f"max residual {max(r['residual'] for r in rows):.3e}")
        return EXIT_VIOLATION if bad else EXIT_OK

    if args.verb == "coeffs":
        rows = harness.run_coeffs(cfg)
        bad = [r for r in rows if not r["pass"]]
        print(f"{len(rows)} coefficient checks, {len(bad)} failures, "
              f"max diff {max(r['diff'] for r in rows):.3e}")
        return EXIT_VIOLATION if bad else EXIT_OK

    rows = harness.run_catalog(cfg)
    bad = [r for r in rows if not r["pass"]]
    for r in bad:
        print(f"  fail: {r['name']} {r['class']} {r['detail']}")
    print(f"{len(rows)} catalog checks, {len(bad)} failures")
    return EXIT_VIOLATION if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
