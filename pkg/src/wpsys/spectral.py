"""Scalar special functions of the short-geodesic count.

Notation used in docstrings and the CLI:

    lambda(l) = (e^l + e^-l - 2) / (2 l)          intensity of primitive lengths
    I(L)      = int_0^L lambda                     expected number of lengths below L
    C         = I(1)
    T(L)      = int_1^L e^x / (2x) dx              growth function, L >= 1
    L0(g)     = T^{-1}(log(g) / 2)                 critical length scale

All logarithms are natural.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ToleranceNotMet
from .quadrature import DEFAULT_QUAD, QuadResult, QuadratureConfig, integrate

SERIES_SWITCH = 0.5
# 1/(2k)! for k = 1..8; at l = 0.5 the ninth term is below 1e-18 of the sum
_SERIES_COEFS = np.array([1.0 / math.factorial(2 * k) for k in range(1, 9)])


def intensity(l):
    """lambda(l) = (cosh l - 1)/l, via the odd series below 0.5.

    Accepts scalars or arrays; intensity(0) = 0.
    """
    x = np.asarray(l, dtype=float)
    if np.any(x < 0):
        raise ValueError("intensity is defined for l >= 0")
    small = x < SERIES_SWITCH
    # l/2 + l^3/24 + l^5/720 + ... in Horner form on l^2
    x2 = x * x
    acc = np.zeros_like(x)
    for c in _SERIES_COEFS[::-1]:
        acc = acc * x2 + c
    series = acc * x
    safe = np.where(small, 1.0, x)
    direct = 2.0 * np.sinh(0.5 * safe) ** 2 / safe
    out = np.where(small, series, direct)
    return float(out) if out.ndim == 0 else out


def expected_count_result(L: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> QuadResult:
    if not (L >= 0 and math.isfinite(L)):
        raise ValueError(f"L must be finite and >= 0, got {L}")
    return integrate(intensity, 0.0, L, cfg)


def expected_count(L: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """I(L), the mean number of primitive lengths in (0, L]."""
    return expected_count_result(L, cfg).value


def count_below_one(cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """C = I(1)."""
    return expected_count(1.0, cfg)


def _growth_integrand(x):
    return 0.5 * np.exp(x) / x


def growth_result(L: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> QuadResult:
    if not (L >= 1 and math.isfinite(L)):
        raise ValueError(f"T(L) needs finite L >= 1, got {L}")
    return integrate(_growth_integrand, 1.0, L, cfg)


def growth(L: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """T(L) = int_1^L e^x/(2x) dx."""
    return growth_result(L, cfg).value


def growth_inverse(y: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Solve T(L) = y for L >= 1 by doubling then bisection.

    Stops once |T(L) - y| <= max(abs_tol, rel_tol*y).
    """
    if not (y >= 0 and math.isfinite(y)):
        raise ValueError(f"y must be finite and >= 0, got {y}")
    if y == 0:
        return 1.0
    tol = max(cfg.abs_tol, cfg.rel_tol * y)
    lo, hi = 1.0, 2.0
    while growth(hi, cfg) < y:
        lo, hi = hi, 2.0 * hi
        if hi > 700:
            raise ToleranceNotMet(f"T^-1({y}) exceeds the representable range")
    while True:
        mid = 0.5 * (lo + hi)
        t = growth(mid, cfg)
        if abs(t - y) <= tol:
            return mid
        if not lo < mid < hi:
            raise ToleranceNotMet(f"bisection for T^-1({y}) stalled at L={mid} (residual {t - y:.3g})")
        if t < y:
            lo = mid
        else:
            hi = mid


def critical_length(g: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """L0(g) = T^{-1}(log(g)/2); ``g`` may be a huge int."""
    if g < 2:
        raise ValueError(f"L0 needs g >= 2, got {g}")
    return growth_inverse(0.5 * math.log(g), cfg)


def growth_bounds(L: float) -> tuple[float, float]:
    """Elementary bracket (e^L - e)/(2L) <= T(L) <= e^L/2."""
    return (math.exp(L) - math.e) / (2.0 * L), 0.5 * math.exp(L)


def threshold_lower_bound(g: float, eps: float) -> float:
    """Lower bound on T((1+eps) loglog g) obtained from (e^L - e)/(2L).

    Equals ((log g)^{1+eps} - e) / (2 (1+eps) loglog g).
    """
    lg = math.log(g)
    return (lg ** (1.0 + eps) - math.e) / (2.0 * (1.0 + eps) * math.log(lg))
