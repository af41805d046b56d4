"""Separating-multicurve bound along L = factor * ln g, n = floor(ln g).

Prints one CSV row per decade of g with the four additive terms, and reports
the first decade (if any) where the total drops below --target.
"""

import argparse
import csv
import math
import sys

from wpsys import BoundConstants, separating_bound


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--factor", type=float, default=1.5)
    ap.add_argument("--e-lo", type=int, default=3)
    ap.add_argument("--e-hi", type=int, default=40)
    ap.add_argument("--target", type=float, default=1e-3)
    ap.add_argument("--constants", help="flat JSON of BoundConstants fields")
    args = ap.parse_args(argv)
    consts = BoundConstants.from_file(args.constants) if args.constants else BoundConstants()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["log10_g", "n", "L", "one_pants", "small_pieces", "large_pieces_near", "large_pieces_far", "total"])
    first_below = None
    for e in range(args.e_lo, args.e_hi + 1):
        g = 10**e
        n = math.floor(math.log(g))
        L = args.factor * math.log(g)
        b = separating_bound(g, n, L, consts)
        w.writerow([e, n, format(L, ".17g")] + [format(v, ".17g") for v in b.terms.values()] + [format(b.total, ".17g")])
        if first_below is None and b.total < args.target:
            first_below = e
    msg = f"first g = 10^{first_below}" if first_below is not None else "not reached"
    print(f"# total < {args.target:g}: {msg}", file=sys.stderr)


if __name__ == "__main__":
    main()
