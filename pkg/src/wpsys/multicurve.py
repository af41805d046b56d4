"""Separating multicurves: enumeration, the integral formula, and the length bound.

A separating multicurve gamma_1 + ... + gamma_k on S_{g,n} cuts off a piece
S_{g0, k+n0} carrying n0 of the original boundaries; the other side is
S_{g-g0-k+1, k+n-n0}.  Such a cut is recorded as a ``SplittingClass``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyRange
from .estimators import BoundConstants
from .quadrature import DEFAULT_QUAD, QuadratureConfig, integrate_cube
from .wp_poly import PolyTable, SurfaceType, default_table

P_SPLIT = 10  # complexity above which the crude e^{2L} estimate takes over


@dataclass(frozen=True, order=True)
class SplittingClass:
    g0: int
    k: int
    n0: int

    def __post_init__(self):
        if self.g0 < 0 or self.n0 < 0 or self.k < 1:
            raise ValueError(f"invalid splitting class {self}")
        if self.m < 1:
            raise ValueError(f"small piece of {self} is not hyperbolic")

    @property
    def m(self) -> int:
        """|chi| of the small piece, 2 g0 - 2 + k + n0."""
        return 2 * self.g0 - 2 + self.k + self.n0

    def small_piece(self) -> SurfaceType:
        return SurfaceType(self.g0, self.k + self.n0)

    def complement(self, g: int, n: int) -> SurfaceType:
        return SurfaceType(g - self.g0 - self.k + 1, self.k + n - self.n0)

    def label_count(self, n: int) -> int:
        """Ways to choose which n0 of the n boundaries go to the small piece."""
        return math.comb(n, self.n0)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.g0, self.k, self.n0)


def max_split_complexity(g: int, n: int) -> int:
    return (2 * g - 2 + n) // 2


def enumerate_splittings(g: int, n: int, m: int) -> list[SplittingClass]:
    """All (g0, k, n0) with 2 g0 - 2 + k + n0 = m whose complement is a surface.

    Sorted lexicographically by (g0, k, n0).
    """
    if 2 * g - 2 + n < 2:
        raise EmptyRange(f"S_{{{g},{n}}} admits no separating multicurve")
    top = max_split_complexity(g, n)
    if not 1 <= m <= top:
        raise EmptyRange(f"m={m} outside [1, {top}] for (g, n) = ({g}, {n})")
    out = []
    for g0 in range(0, (m + 2) // 2 + 1):
        for n0 in range(0, n + 1):
            k = m + 2 - 2 * g0 - n0
            if k < 1:
                continue
            if g - g0 - k + 1 < 0:
                continue
            out.append(SplittingClass(g0, k, n0))
    return sorted(out)


def one_handle_flag(c: SplittingClass) -> int:
    """M(gamma): 1 when the cut-off piece is a one-holed torus, else 0."""
    return int((c.g0, c.k + c.n0) == (1, 1))


def _power_over_factorial(L: float, p: int, q: int) -> float:
    try:
        return L**p / math.factorial(q)
    except OverflowError:
        lv = p * math.log(L) - math.lgamma(q + 1)
        return math.exp(lv) if lv < 709.0 else math.inf


def simplex_volume(k: int, L: float) -> float:
    """Volume of {x in R_+^k : sum x <= L} = L^k/k!."""
    if k < 1 or not L > 0:
        raise ValueError("need k >= 1 and L > 0")
    return _power_over_factorial(L, k, k)


def simplex_moment(k: int, L: float) -> float:
    """int over the same simplex of x_1 ... x_k = L^{2k}/(2k)!."""
    if k < 1 or not L > 0:
        raise ValueError("need k >= 1 and L > 0")
    return _power_over_factorial(L, 2 * k, 2 * k)


@dataclass(frozen=True)
class Piece:
    """One component of the cut surface.

    ``curves`` lists the multicurve components (0-based) along this piece's
    boundary, with repeats for a curve that bounds the piece on both sides;
    ``boundaries`` indexes the ambient boundary lengths it keeps.
    """

    surface: SurfaceType
    curves: tuple[int, ...]
    boundaries: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.curves) + len(self.boundaries) != self.surface.boundaries:
            raise ValueError(f"piece {self.surface} needs {self.surface.boundaries} boundary slots")


@dataclass(frozen=True)
class MultiCurveSpec:
    pieces: tuple[Piece, ...]
    M: int = 0
    sym_order: int = 1
    n_curves: int = field(init=False)

    def __post_init__(self):
        if self.M not in (0, 1):
            raise ValueError("M must be 0 or 1")
        if self.sym_order < 1:
            raise ValueError("sym_order must be >= 1")
        used = sorted({c for p in self.pieces for c in p.curves})
        if not used or used != list(range(len(used))):
            raise ValueError("curve indices must be 0..k-1 with none skipped")
        object.__setattr__(self, "n_curves", len(used))

    @classmethod
    def from_splitting(cls, c: SplittingClass, g: int, n: int, sym_order: int | None = None) -> "MultiCurveSpec":
        """Cut along a separating multicurve of class ``c``; boundaries 0..n0-1 go to the small side.

        ``sym_order`` defaults to k!, the symmetry factor used in the bound.
        """
        curves = tuple(range(c.k))
        small = Piece(c.small_piece(), curves, tuple(range(c.n0)))
        big = Piece(c.complement(g, n), curves, tuple(range(c.n0, n)))
        return cls((small, big), M=one_handle_flag(c), sym_order=sym_order or math.factorial(c.k))


def _vectorised(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def call(s: np.ndarray) -> np.ndarray:
        try:
            out = np.asarray(f(s), dtype=float)
        except (TypeError, ValueError):
            out = np.array([float(f(v)) for v in s])
        return np.broadcast_to(out, s.shape) if out.shape != s.shape else out
    return call


def mirzakhani_rhs(spec: MultiCurveSpec, f: Callable, L_cap: float, boundary_lengths: Sequence[float] = (),
                   table: PolyTable | None = None, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """2^{-M}/|Sym| * int_{[0, L_cap]^k} f(sum x) prod_pieces V(x, L) prod x_i dx.

    ``f`` should accept an array of total lengths; scalar-only callables are
    wrapped.  Weights on the curves are all 1.
    """
    table = table or default_table()
    if not L_cap > 0:
        raise ValueError("L_cap must be positive")
    blens = np.asarray(boundary_lengths, dtype=float)
    polys = [table[p.surface] for p in spec.pieces]
    fv = _vectorised(f)
    k = spec.n_curves

    def integrand(x: np.ndarray) -> np.ndarray:
        out = fv(x.sum(axis=1)) * np.prod(x, axis=1)
        for piece, poly in zip(spec.pieces, polys):
            cols = [x[:, c] for c in piece.curves]
            cols += [np.full(len(x), blens[b]) for b in piece.boundaries]
            args = np.column_stack(cols) if cols else np.empty((len(x), 0))
            out = out * poly.evaluate_array(args)
        return out

    r = integrate_cube(integrand, k, 0.0, float(L_cap), cfg)
    return r.value * 2.0 ** (-spec.M) / spec.sym_order


@dataclass(frozen=True)
class BoundBreakdown:
    total: float
    terms: dict


def separating_bound(g: int, n: int, L: float, consts: BoundConstants = BoundConstants()) -> BoundBreakdown:
    """Upper bound for Vol{L_1(X) <= L} / V_{g,n}(L), L_1 the shortest separating multicurve.

    c1 Lt^2 e^{L/2}/g + c2 e^{L/2} Lt^7/g^2 + c3 e^{2L} n^10/g^9 + c4 e^{2L} n^12/g^10,
    with Lt = max(L, n).
    """
    if g < 2 or n < 0 or not L > 0:
        raise ValueError("need g >= 2, n >= 0, L > 0")
    Lt = max(L, float(n))
    lg = math.log(g)
    half = L / 2.0
    twice = 2.0 * L

    def term(c, log_rest):
        return c * math.exp(log_rest) if log_rest < 709.0 else math.inf

    t1 = term(consts.c1, 2 * math.log(Lt) + half - lg)
    t2 = term(consts.c2, half + 7 * math.log(Lt) - 2 * lg)
    t3 = 0.0 if n == 0 else term(consts.c3, twice + 10 * math.log(n) - 9 * lg)
    t4 = 0.0 if n == 0 else term(consts.c4, twice + 12 * math.log(n) - 10 * lg)
    terms = {"one_pants": t1, "small_pieces": t2, "large_pieces_near": t3, "large_pieces_far": t4}
    return BoundBreakdown(t1 + t2 + t3 + t4, terms)


def case_bounds(g: int, n: int, L: float, m: int, consts: BoundConstants = BoundConstants()) -> dict:
    """Normalised contribution of splitting classes of complexity m.

    m = 1        c1 Lt^2 e^{L/2} / g
    2 <= m <= 10 Cm e^{L/2} Lt^{3m+1} / g^m
    m >= 11      all such m together: J1 = D' e^{2L} (P+1) n^P / g^{P-1} and
                 J2 = 2 D' e^{2L} n^{P+2} / g^P, P = 10
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    Lt = max(L, float(n))
    lg = math.log(g)

    def ex(log_v):
        return math.exp(log_v) if log_v < 709.0 else math.inf

    if m == 1:
        return {"m": 1, "case": "one_pants", "bound": consts.c1 * ex(2 * math.log(Lt) + L / 2 - lg)}
    if m <= P_SPLIT:
        return {"m": m, "case": "small_piece",
                "bound": consts.Cm * ex(L / 2 + (3 * m + 1) * math.log(Lt) - m * lg)}
    P = P_SPLIT
    if n == 0:
        J1 = J2 = 0.0
    else:
        J1 = consts.Dprime * (P + 1) * ex(2 * L + P * math.log(n) - (P - 1) * lg)
        J2 = 2 * consts.Dprime * ex(2 * L + (P + 2) * math.log(n) - P * lg)
    return {"m": m, "case": "large_piece", "J1": J1, "J2": J2, "bound": J1 + J2}


def case_table(g: int, n: int, L: float, consts: BoundConstants = BoundConstants()) -> list[dict]:
    """Rows for m = 1..min(10, m_top) plus one aggregated large-piece row when m_top > 10."""
    top = max_split_complexity(g, n)
    rows = [case_bounds(g, n, L, m, consts) for m in range(1, min(P_SPLIT, top) + 1)]
    if top > P_SPLIT:
        rows.append(case_bounds(g, n, L, P_SPLIT + 1, consts))
    return rows


def collar_defect_bound(g: int, n: int, L: float, consts: BoundConstants = BoundConstants()) -> BoundBreakdown:
    """Bound on the volume fraction lacking disjoint L/4 collars.

    Such surfaces carry a separating multicurve of length <= inflation * L
    (inflation = 5 by default), so this is ``separating_bound`` at that length.
    """
    return separating_bound(g, n, consts.inflation * L, consts)
