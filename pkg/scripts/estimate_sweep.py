"""Systole-probability estimate and error budget across genera at L = L0(g).

Compares the default truncation order 2*ceil(ln g) with the order
c * ln g (rounded up to even) that makes the truncation term below g^-c.
"""

import argparse
import math

from wpsys import critical_length, expected_count, systole_prob_estimate


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--exponents", type=int, nargs="+", default=[3, 6, 9, 12, 15, 20, 30])
    ap.add_argument("--c", type=float, default=17.0, help="truncation exponent; the proof needs c > (2+C)e^2")
    args = ap.parse_args(argv)

    print("log10_g,L0,I,value,n_default,trunc_default,n_proof,trunc_proof,g^-c,volume_ratio")
    for e in args.exponents:
        g = 10**e
        L = critical_length(g)
        n_default = 2 * math.ceil(math.log(g))
        n_proof = 2 * math.ceil(args.c * math.log(g) / 2)
        a = systole_prob_estimate(g, L, n_default)
        b = systole_prob_estimate(g, L, n_proof)
        cells = [e, L, expected_count(L), a.value, a.terms["n_terms"], a.terms["truncation"],
                 b.terms["n_terms"], b.terms["truncation"], math.exp(-args.c * math.log(g)), a.terms["volume_ratio"]]
        print(",".join(format(v, ".6g") if isinstance(v, float) else str(v) for v in cells))


if __name__ == "__main__":
    main()
