"""Compare every corollary's own formula with the specialised general bound.

Prints each (family, corollary) pair with its worst disagreement and writes
all mismatching cells, with both values, to a CSV file.
"""

import argparse
import collections
import csv
from pathlib import Path

from fracineq import harness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path)
    ap.add_argument("--out", type=Path, default=Path("out/corollary_findings.csv"))
    ap.add_argument("--tol", type=float, default=1e-10)
    args = ap.parse_args()

    cfg = harness.load_config(args.config) if args.config else harness.SweepConfig()
    rows = harness.run_corollary_checks(cfg, tol=args.tol)
    worst = collections.defaultdict(float)
    count = collections.Counter()
    for r in rows:
        key = (r["family"], r["corollary"])
        worst[key] = max(worst[key], r["diff"])
        count[key] += r["finding"]
    print(f"{'family':<14}{'corollary':<11}{'findings':>9}{'max |diff|':>13}")
    for key in sorted(worst):
        print(f"{key[0]:<14}{key[1]:<11}{count[key]:>9}{worst[key]:>13.3e}")

    findings = [r for r in rows if r["finding"]]
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=harness.COROLLARY_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(findings)
    print(f"\n{len(findings)} of {len(rows)} cells disagree beyond {args.tol:g}; details in {args.out}")


if __name__ == "__main__":
    main()
