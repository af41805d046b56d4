"""Globally adaptive Gauss-Kronrod (7/15) quadrature with deterministic reduction."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from .errors import ToleranceNotMet

# QUADPACK qk15 abscissae (positive half) and weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point layout: -x_0..-x_6, 0, x_6..x_0
NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD_W = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
GAUSS_W = np.zeros(15)
GAUSS_W[[1, 3, 5]] = _WG[:3]
GAUSS_W[7] = _WG[3]
GAUSS_W[[9, 11, 13]] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2**20

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def tighter(self, factor: float = 0.1) -> "QuadratureConfig":
        return replace(self, abs_tol=self.abs_tol * factor, rel_tol=self.rel_tol * factor)


DEFAULT_QUAD = QuadratureConfig()


class QuadResult(NamedTuple):
    value: float
    abserr: float
    intervals: int


def gk15(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    """One Kronrod panel: (K15 estimate, |K15 - G7|)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = np.asarray(f(mid + half * NODES), dtype=float)
    if fx.shape != (15,):
        fx = np.broadcast_to(fx, (15,))
    k = half * float(KRONROD_W @ fx)
    g = half * float(GAUSS_W @ fx)
    return k, abs(k - g)


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              cfg: QuadratureConfig = DEFAULT_QUAD) -> QuadResult:
    """Integrate a vectorised ``f`` over [a, b].

    Panels are bisected worst-error first until the summed error estimate is
    within max(abs_tol, rel_tol*|I|).  The returned value is an fsum over panels
    in left-to-right order, so repeated calls are bit-identical.
    """
    a, b = float(a), float(b)
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    if b < a:
        r = integrate(f, b, a, cfg)
        return QuadResult(-r.value, r.abserr, r.intervals)

    v, e = gk15(f, a, b)
    if not (math.isfinite(v) and math.isfinite(e)):
        raise ToleranceNotMet(f"non-finite integrand on [{a}, {b}]")
    heap = [(-e, a, b, v)]
    panels = 1
    total, err = v, e
    while True:
        if err <= max(cfg.abs_tol, cfg.rel_tol * abs(total)):
            # running sums drift; confirm against an exact recount
            total = math.fsum(p[3] for p in heap)
            err = math.fsum(-p[0] for p in heap)
            if err <= max(cfg.abs_tol, cfg.rel_tol * abs(total)):
                break
        if panels >= cfg.max_subdivisions:
            raise ToleranceNotMet(
                f"quadrature on [{a}, {b}] hit {cfg.max_subdivisions} subdivisions (error {err:.3g})"
            )
        neg_e, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise ToleranceNotMet(f"cannot subdivide [{lo}, {hi}] further (error {err:.3g})")
        v1, e1 = gk15(f, lo, mid)
        v2, e2 = gk15(f, mid, hi)
        if not all(math.isfinite(t) for t in (v1, e1, v2, e2)):
            raise ToleranceNotMet(f"non-finite integrand on [{lo}, {hi}]")
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        panels += 1
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
    ordered = sorted(heap, key=lambda p: p[1])
    return QuadResult(math.fsum(p[3] for p in ordered), math.fsum(-p[0] for p in ordered), panels)


def integrate_cube(f: Callable[[np.ndarray], np.ndarray], dim: int, a: float, b: float,
                   cfg: QuadratureConfig = DEFAULT_QUAD) -> QuadResult:
    """Iterated adaptive quadrature of ``f(points (N, dim)) -> (N,)`` over [a, b]^dim.

    Inner integrals run at a tenth of the outer tolerance; the reported error
    is the outer estimate plus the largest inner estimate times the box width.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if dim == 1:
        return integrate(lambda x: f(x[:, None]), a, b, cfg)

    inner_cfg = cfg.tighter()
    worst_inner = [0.0]

    def outer(xs: np.ndarray) -> np.ndarray:
        out = np.empty(len(xs))
        for i, x0 in enumerate(xs):
            r = integrate_cube(
                lambda pts, x0=x0: f(np.column_stack([np.full(len(pts), x0), pts])),
                dim - 1, a, b, inner_cfg,
            )
            worst_inner[0] = max(worst_inner[0], r.abserr)
            out[i] = r.value
        return out

    r = integrate(outer, a, b, cfg)
    return QuadResult(r.value, r.abserr + worst_inner[0] * abs(b - a), r.intervals)
