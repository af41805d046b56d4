"""Generate the shipped Weil-Petersson volume table from Mirzakhani's recursion.

Polynomials are dicts ``{(alpha, j): Fraction}`` meaning
``coef * pi**(2j) * prod(L_i**(2*alpha_i))``.  Everything is exact.

The recursion is run in the convention V_{1,1}(L) = (L^2 + 4 pi^2)/48, which is
the one the recursion closes under.  The written table stores the (1,1) entry
as (L^2 + 4 pi^2)/24 (the one-handle convention paired with the 2^{-M} factor
of the integral formula); every other entry is convention independent.

Usage::

    python scripts/build_wp_table.py [--m-max 4] [--out src/wpsys/data/wp_table.json]
"""

from __future__ import annotations

import argparse
import itertools
import json
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from pathlib import Path

TABLE_VERSION = 1
DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "wpsys" / "data" / "wp_table.json"


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2 (only even n are used here)."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    b = a[0]
    return -b if n == 1 else b


def zeta_even(i: int) -> Fraction:
    """Rational r with zeta(2i) = r * pi^(2i); zeta(0) = -1/2."""
    return Fraction((-1) ** (i + 1)) * bernoulli(2 * i) * 2 ** (2 * i) / (2 * factorial(2 * i))


@lru_cache(maxsize=None)
def kernel_moment(k: int) -> tuple[tuple[int, Fraction, int], ...]:
    """F_{2k+1}(t) = int_0^oo x^{2k+1} H(x, t) dx as ((p, coef, j), ...) for coef*pi^{2j}*t^{2p}.

    H(x, t) = 1/(1 + e^{(x+t)/2}) + 1/(1 + e^{(x-t)/2}).
    """
    out = []
    for i in range(k + 2):
        c = factorial(2 * k + 1) * zeta_even(i) * (2 ** (2 * i + 1) - 4) / factorial(2 * k + 2 - 2 * i)
        if c:
            out.append((k + 1 - i, c, i))
    return tuple(out)


def _add(poly: dict, key, value: Fraction) -> None:
    v = poly.get(key, Fraction(0)) + value
    if v:
        poly[key] = v
    else:
        poly.pop(key, None)


def _stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 0 and 2 * g - 2 + n > 0


@lru_cache(maxsize=None)
def volume(g: int, n: int) -> tuple:
    """V_{g,n} for n >= 1 in the recursion convention, as a sorted tuple of items."""
    if not _stable(g, n) or n < 1:
        raise ValueError(f"recursion needs a stable type with n >= 1, got {(g, n)}")
    if (g, n) == (0, 3):
        return (((0, 0, 0), 0), Fraction(1)),
    if (g, n) == (1, 1):
        return ((((1,), 0), Fraction(1, 48)), (((0,), 1), Fraction(4, 48)))

    rhs: dict = {}
    rest_positions = list(range(1, n))

    def push_A(ax, ay, placed, j, coef):
        # int int x^{2ax+1} y^{2ay+1} H(x+y, L1) dx dy, times the 1/2 prefactor
        beta = Fraction(factorial(2 * ax + 1) * factorial(2 * ay + 1), factorial(2 * ax + 2 * ay + 3))
        for p, c, i in kernel_moment(ax + ay + 1):
            alpha = (p,) + placed
            _add(rhs, (alpha, j + i), coef * beta * c / 2)

    # connected term: cut along a nonseparating curve
    if _stable(g - 1, n + 1):
        for (a, j), coef in volume(g - 1, n + 1):
            push_A(a[0], a[1], tuple(a[2:]), j, coef)

    # disconnected term: ordered splittings g1 + g2 = g, I + J = {2..n}
    for g1 in range(g + 1):
        g2 = g - g1
        for r in range(len(rest_positions) + 1):
            for I in itertools.combinations(rest_positions, r):
                J = [q for q in rest_positions if q not in I]
                if not (_stable(g1, len(I) + 1) and _stable(g2, len(J) + 1)):
                    continue
                for (a1, j1), c1 in volume(g1, len(I) + 1):
                    for (a2, j2), c2 in volume(g2, len(J) + 1):
                        placed = [0] * (n - 1)
                        for pos, e in zip(I, a1[1:]):
                            placed[pos - 1] = e
                        for pos, e in zip(J, a2[1:]):
                            placed[pos - 1] = e
                        push_A(a1[0], a2[0], tuple(placed), j1 + j2, c1 * c2)

    # boundary term: pants bounded by L1, Lj and an interior curve
    if n >= 2 and _stable(g, n - 1):
        sub = volume(g, n - 1)
        for jpos in rest_positions:
            others = [q for q in rest_positions if q != jpos]
            for (a, jj), coef in sub:
                ax = a[0]
                for p, c, i in kernel_moment(ax):
                    # (F(L1+Lj) + F(L1-Lj))/2 expanded in even powers
                    for r in range(p + 1):
                        alpha = [0] * n
                        alpha[0] = p - r
                        alpha[jpos] = r
                        for pos, e in zip(others, a[1:]):
                            alpha[pos] = e
                        _add(rhs, (tuple(alpha), jj + i), coef * c * comb(2 * p, 2 * r))

    # d/dL1 (L1 V) = rhs
    poly = {(alpha, j): c / (2 * alpha[0] + 1) for (alpha, j), c in rhs.items()}
    return tuple(sorted(poly.items()))


def closed_volume(g: int) -> tuple:
    """V_{g,0} for g >= 2 from the dilaton equation V'_{g,1}(2 pi i) = 2 pi i (2g-2) V_g."""
    if g < 2:
        raise ValueError("closed volumes need g >= 2")
    # V'_{g,1}(L) / (2 pi i) at L = 2 pi i equals sum_a 2a c_a (-4 pi^2)^{a-1}
    acc: dict = {}
    for (a, j), c in volume(g, 1):
        e = a[0]
        if e == 0:
            continue
        _add(acc, ((), j + e - 1), Fraction(2 * e) * c * Fraction(-4) ** (e - 1) / (2 * g - 2))
    return tuple(sorted(acc.items()))


def table_volume(g: int, n: int) -> tuple:
    """Entry as shipped (one-handle convention for (1,1))."""
    if n == 0:
        return closed_volume(g)
    poly = volume(g, n)
    if (g, n) == (1, 1):
        return tuple((key, 2 * c) for key, c in poly)
    return poly


def table_types(m_max: int) -> list[tuple[int, int]]:
    out = []
    for m in range(1, m_max + 1):
        for g in range(0, m // 2 + 2):
            n = m + 2 - 2 * g
            if n >= 0 and _stable(g, n) and not (n == 0 and g < 2):
                out.append((g, n))
    return sorted(out, key=lambda t: (2 * t[0] - 2 + t[1], t[0], t[1]))


def to_json(m_max: int) -> dict:
    entries = []
    for g, n in table_types(m_max):
        terms = [
            {"xpow": list(a), "pi2pow": j, "num": c.numerator, "den": c.denominator}
            for (a, j), c in table_volume(g, n)
        ]
        entries.append({"g": g, "n": n, "terms": terms})
    return {"version": TABLE_VERSION, "m_max": m_max, "entries": entries}


def dumps_table(doc: dict) -> str:
    """One entry header and one term per line; stable across runs."""
    lines = ["{", f' "version": {doc["version"]},', f' "m_max": {doc["m_max"]},', ' "entries": [']
    for e_idx, entry in enumerate(doc["entries"]):
        lines.append(f'  {{"g": {entry["g"]}, "n": {entry["n"]}, "terms": [')
        terms = [json.dumps(t) for t in entry["terms"]]
        lines.extend(f"   {t}," for t in terms[:-1])
        lines.append(f"   {terms[-1]}")
        lines.append("  ]}" + ("," if e_idx < len(doc["entries"]) - 1 else ""))
    lines += [" ]", "}", ""]
    return "\n".join(lines)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=4)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args(argv)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(dumps_table(to_json(args.m_max)))
    print(f"wrote {args.out} ({len(table_types(args.m_max))} entries)")


if __name__ == "__main__":
    main()
