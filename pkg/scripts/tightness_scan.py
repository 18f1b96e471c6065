"""How tight is each bound as lambda moves from midpoint to trapezoid form?

Scans a fine lambda grid for one function and family and prints the ratio
|S_f| / bound; a ratio near 1 means the bound is close to sharp there.
"""

import argparse

import numpy as np

from fracineq.bounds import verify
from fracineq.convexity import catalog_by_name
from fracineq.sfunc import InequalityParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--function", default="square", choices=sorted(catalog_by_name()))
    ap.add_argument("--family", default="s-convex", choices=["s-convex", "quasi-convex", "m-convex"])
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--q", type=float, default=1.0)
    ap.add_argument("--param", type=float, default=1.0, help="s or m")
    ap.add_argument("--xfrac", type=float, default=0.5)
    ap.add_argument("--points", type=int, default=21)
    args = ap.parse_args()

    f = catalog_by_name()[args.function]
    a, b = f.domain
    x = a + args.xfrac * (b - a)
    s = args.param if args.family == "s-convex" else None
    m = args.param if args.family == "m-convex" else None
    print(f"{'lambda':>8}{'|S_f|':>14}{'bound':>14}{'ratio':>9}  status")
    for lam in np.linspace(0.0, 1.0, args.points):
        p = InequalityParams(a, b, x, float(lam), args.alpha, args.q, s, m)
        rep = verify(f, args.family, p)
        ratio = rep.lhs / rep.rhs if rep.rhs > 0 else float("nan")
        print(f"{lam:>8.3f}{rep.lhs:>14.6e}{rep.rhs:>14.6e}{ratio:>9.4f}  {rep.status}")


if __name__ == "__main__":
    main()
