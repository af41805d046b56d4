import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wpsys import (BoundConstants, MultiCurveSpec, Piece, SplittingClass, SurfaceType, case_bounds, case_table,
                   collar_defect_bound, enumerate_splittings, mirzakhani_rhs, one_handle_flag,
                   separating_bound, simplex_moment, simplex_volume)
from wpsys.errors import EmptyRange
from wpsys.multicurve import max_split_complexity
from wpsys.wp_poly import PI_Q, base_volume


def brute_force_splittings(g, n, m):
    """Glue two surfaces along k curves and keep the cuts where the first side has |chi| = m."""
    found = set()
    for k in range(1, 2 * g + n + 2):
        for g1 in range(g + 1):
            for n0 in range(n + 1):
                g2 = g + 1 - g1 - k
                if g2 < 0:
                    continue
                s1 = (g1, k + n0)
                s2 = (g2, k + n - n0)
                stable = all(2 * a - 2 + b > 0 for a, b in (s1, s2))
                chi1 = 2 * g1 - 2 + k + n0
                chi2 = 2 * g2 - 2 + k + n - n0
                if stable and chi1 + chi2 == 2 * g - 2 + n and chi1 == m and chi1 <= chi2:
                    found.add((g1, k, n0))
    return found


@pytest.mark.parametrize("g", range(0, 9))
@pytest.mark.parametrize("n", range(0, 5))
def test_enumeration_matches_brute_force(g, n):
    if 2 * g - 2 + n < 2:
        with pytest.raises(EmptyRange):
            enumerate_splittings(g, n, 1)
        return
    for m in range(1, max_split_complexity(g, n) + 1):
        got = enumerate_splittings(g, n, m)
        assert {c.as_tuple() for c in got} == brute_force_splittings(g, n, m)
        assert got == sorted(got)


def test_genus_three_single_curve_classes():
    got = enumerate_splittings(3, 0, 1)
    assert {(c.small_piece().genus, c.small_piece().boundaries) for c in got} == {(1, 1), (0, 3)}


def test_out_of_range():
    with pytest.raises(EmptyRange):
        enumerate_splittings(3, 0, 3)
    with pytest.raises(EmptyRange):
        enumerate_splittings(3, 0, 0)


def test_one_handle_flag():
    assert one_handle_flag(SplittingClass(1, 1, 0)) == 1
    assert one_handle_flag(SplittingClass(0, 3, 0)) == 0
    assert one_handle_flag(SplittingClass(1, 2, 0)) == 0


def test_splitting_pieces():
    c = SplittingClass(1, 2, 1)
    assert c.m == 3
    assert c.small_piece() == SurfaceType(1, 3)
    assert c.complement(5, 2) == SurfaceType(3, 3)
    assert c.label_count(4) == 4


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_simplex_formulas_monte_carlo(k):
    rng = np.random.default_rng(1234 + k)
    L, N = 1.7, 200_000
    x = rng.uniform(0, L, size=(N, k))
    inside = x.sum(axis=1) <= L
    box = L**k
    for vals, exact in [(inside.astype(float), simplex_volume(k, L)),
                        (np.where(inside, np.prod(x, axis=1), 0.0), simplex_moment(k, L))]:
        est = box * vals.mean()
        se = box * vals.std(ddof=1) / math.sqrt(N)
        assert abs(est - exact) <= 3 * se


def test_simplex_exact_small():
    assert simplex_volume(2, 3.0) == 4.5
    assert simplex_moment(1, 2.0) == 2.0
    assert math.isfinite(simplex_volume(300, 50.0))


def test_rhs_genus_two_one_handle():
    # separating curve on S_2 cuts two one-holed tori: 1/2 int_0^L x V11(x)^2 dx
    spec = MultiCurveSpec.from_splitting(SplittingClass(1, 1, 0), 2, 0)
    assert spec.M == 1 and spec.sym_order == 1
    L = 3.0
    got = mirzakhani_rhs(spec, lambda s: np.ones_like(s), L)
    # V11 = x^2/24 + pi^2/6; x V11^2 = x^5/576 + pi^2 x^3/72 + pi^4 x/36
    Lq, pi2 = Fraction(L), PI_Q**2
    exact = Lq**6 / 3456 + pi2 * Lq**4 / 288 + pi2**2 * Lq**2 / 72
    assert got == pytest.approx(float(exact / 2), rel=1e-10)


def test_rhs_nonseparating_curve_with_weight():
    # one non-separating curve on S_2: cut piece S_{1,2}, f(s) = s, Sym = 2 for the two sides
    spec = MultiCurveSpec((Piece(SurfaceType(1, 2), (0, 0)),), M=0, sym_order=2)
    L = 2.0
    p = base_volume((1, 2))
    got = mirzakhani_rhs(spec, lambda s: s, L)
    total = Fraction(0)
    for (a, b), j, c in p.terms:
        e = 2 * (a + b) + 2  # x * x * x^{2a+2b}
        total += c * PI_Q ** (2 * j) * Fraction(L) ** (e + 1) / (e + 1)
    assert got == pytest.approx(float(total / 2), rel=1e-10)


def test_multicurve_spec_validation():
    with pytest.raises(ValueError):
        MultiCurveSpec((Piece(SurfaceType(0, 3), (0, 2, 2)),))
    with pytest.raises(ValueError):
        Piece(SurfaceType(0, 4), (0,))


def test_bound_breakdown_additive():
    b = separating_bound(10**6, 14, 10.0)
    assert all(v >= 0 for v in b.terms.values())
    assert b.total == pytest.approx(math.fsum(b.terms.values()), rel=1e-15)
    z = separating_bound(10**6, 0, 10.0)
    assert z.terms["large_pieces_near"] == 0.0 and z.terms["large_pieces_far"] == 0.0


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=2, max_value=10**15), st.integers(min_value=0, max_value=50),
       st.floats(min_value=0.1, max_value=60.0), st.floats(min_value=0.01, max_value=100.0))
def test_bound_scales_with_constants(g, n, L, t):
    a = separating_bound(g, n, L)
    b = separating_bound(g, n, L, BoundConstants().scaled(t))
    assert b.total == pytest.approx(t * a.total, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=2, max_value=10**12), st.integers(min_value=0, max_value=30),
       st.floats(min_value=0.1, max_value=40.0))
def test_bound_decreasing_in_genus(g, n, L):
    assert separating_bound(2 * g, n, L).total < separating_bound(g, n, L).total


def test_case_table_shape():
    rows = case_table(10**6, 14, 10.0)
    assert [r["m"] for r in rows] == list(range(1, 12))
    assert rows[-1]["case"] == "large_piece"
    assert case_bounds(10**6, 14, 10.0, 1)["bound"] == pytest.approx(separating_bound(10**6, 14, 10.0).terms["one_pants"])
    small = case_table(3, 0, 1.0)
    assert [r["m"] for r in small] == [1, 2]


def test_small_piece_exponent_at_two():
    # m = 2 gives Lt^{3m+1} = Lt^7, the same power as the small_pieces term
    g, n, L = 10**5, 3, 7.0
    assert case_bounds(g, n, L, 2)["bound"] == pytest.approx(separating_bound(g, n, L).terms["small_pieces"])


def test_collar_defect_uses_inflation():
    c = BoundConstants(inflation=3.0)
    assert collar_defect_bound(10**8, 2, 1.5, c).total == separating_bound(10**8, 2, 4.5, c).total


def test_tail_decreasing_along_critical_scaling():
    # L = (2 - 0.5) ln g, n = floor(ln g), g = 10^3 .. 10^9
    totals = [separating_bound(10**e, math.floor(math.log(10**e)), 1.5 * math.log(10**e)).total
              for e in range(3, 10)]
    assert all(b < a for a, b in zip(totals, totals[1:]))
