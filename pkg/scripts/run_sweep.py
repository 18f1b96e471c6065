"""Full theorem sweep over the catalog, then plot data for every mode.

    python3 scripts/run_sweep.py --config configs/default.json --out out/sweep --jobs 4
"""

import argparse
import collections
from pathlib import Path

from fracineq import harness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path)
    ap.add_argument("--out", type=Path, default=Path("out/sweep"))
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    cfg = harness.load_config(args.config) if args.config else harness.SweepConfig()
    cfg.out_dir, cfg.jobs = str(args.out), args.jobs
    rows = harness.run(cfg)
    for mode in harness.PLOT_MODES:
        harness.emit_plot_data(rows, mode, args.out / "plots")

    table = collections.defaultdict(collections.Counter)
    for r in rows:
        table[(r.family, r.corollary)][r.holds] += 1
    print(f"{'family':<14}{'corollary':<11}{'hold':>6}{'skip':>6}{'viol':>6}{'fault':>6}")
    for (fam, cor), c in sorted(table.items()):
        print(f"{fam:<14}{cor:<11}{c['true']:>6}{c['skip']:>6}{c['false']:>6}{c['fault']:>6}")

    # tightest evaluated cells relative to the bound
    tight = sorted((r for r in rows if r.holds == "true" and r.rhs > 0), key=lambda r: r.slack / r.rhs)[:5]
    print("\ntightest cells (slack / rhs):")
    for r in tight:
        print(f"  {r.slack / r.rhs:.3e}  {r.name} {r.family} {r.corollary} alpha={r.alpha:g} "
              f"lambda={r.lam:.4g} xfrac={r.xfrac:g} q={r.q:g}")
    summary = harness.summarize(rows)
    print(f"\nexit code {summary['exit_code']}; reports in {args.out}")
    return summary["exit_code"]


if __name__ == "__main__":
    raise SystemExit(main())
