"""Inclusion-exclusion estimate of the short-systole probability and its error budget.

Every O(.) in the asymptotic argument becomes an explicit product of a
``BoundConstants`` field and an elementary expression.  The defaults (all 1,
slack 0) are placeholders, not proven constants; they make runs reproducible
and comparable, nothing more.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .errors import UnknownType
from .quadrature import DEFAULT_QUAD, QuadratureConfig
from .spectral import expected_count, growth, growth_bounds, threshold_lower_bound
from .wp_poly import PolyTable, SurfaceType, combine_pi, default_table


@dataclass(frozen=True)
class BoundConstants:
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    c4: float = 1.0
    Cm: float = 1.0
    Dprime: float = 1.0
    inflation: float = 5.0
    o1_exponent_slack: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "o1_exponent_slack":
                if not 0.0 <= v < 1.0:
                    raise ValueError(f"o1_exponent_slack must lie in [0, 1), got {v}")
            elif not v > 0:
                raise ValueError(f"{f.name} must be strictly positive, got {v}")

    def scaled(self, t: float) -> "BoundConstants":
        """Multiply the additive constants (not inflation or slack) by ``t``."""
        return BoundConstants(
            **{k: (v * t if k in {"c1", "c2", "c3", "c4", "Cm", "Dprime"} else v) for k, v in asdict(self).items()}
        )

    @classmethod
    def from_mapping(cls, doc: Mapping) -> "BoundConstants":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown constant(s): {', '.join(sorted(extra))}")
        return cls(**{k: float(v) for k, v in doc.items()})

    @classmethod
    def from_file(cls, path) -> "BoundConstants":
        return cls.from_mapping(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class Estimate:
    value: float
    lower: float
    upper: float
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.lower <= self.value <= self.upper:
            raise ValueError(f"estimate bounds out of order: {self.lower} <= {self.value} <= {self.upper}")


def inclusion_exclusion_partial(mean: float, n: int) -> float:
    """sum_{k=1}^n (-1)^{k+1} mean^k / k!, summed exactly and rounded once.

    ``mean`` is taken as the exact binary rational it represents, so even and
    odd truncations keep their bracketing order after rounding.
    """
    if mean < 0 or not math.isfinite(mean):
        raise ValueError("mean must be finite and >= 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    p, q = Fraction(mean).as_integer_ratio()
    # common denominator q^n n!: term k contributes p^k q^{n-k} n!/k!
    num = 0
    pk = 1
    qpow = q**n
    fall = math.factorial(n)  # n!/k!, updated as k grows
    for k in range(1, n + 1):
        pk *= p
        qpow //= q
        fall //= k
        term = pk * qpow * fall
        num += term if k % 2 else -term
    den = q**n * math.factorial(n)
    try:
        return num / den
    except OverflowError:
        return math.copysign(math.inf, num)


def binomial_ie_identity(r: int, n: int) -> tuple[int, int]:
    """(sum_{k=1}^n (-1)^{k+1} C(r,k), 1 - (-1)^n C(r-1,n)) as exact integers."""
    if r < 1 or n < 1:
        raise ValueError("r and n must be >= 1")
    lhs = sum((-1) ** (k + 1) * math.comb(r, k) for k in range(1, n + 1))
    rhs = 1 - (-1) ** n * math.comb(r - 1, n)
    return lhs, rhs


def short_tuple_integral_exact(g: int, k: int, L: float, table: PolyTable | None = None,
                               cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """(1/(2^k k!)) int_{[0,L]^k} x_1..x_k V_{g-k,2k}(x_1,x_1,...,x_k,x_k) dx.

    Integrated monomial by monomial with int_0^L x^{2a+1} dx = L^{2a+2}/(2a+2);
    exact in L (as a binary rational) and pi^2 until the final rounding.
    ``cfg`` is accepted for interface symmetry and unused.
    """
    table = table or default_table()
    if k < 1 or k > g:
        raise ValueError(f"need 1 <= k <= g, got g={g}, k={k}")
    if not L > 0:
        raise ValueError("L must be positive")
    cut = SurfaceType(g - k, 2 * k)
    if cut not in table:
        raise UnknownType(f"cut surface {cut} is not in the volume table (complexity <= {table.m_max})")
    poly = table[cut]
    Lq = Fraction(L)
    L2 = Lq * Lq
    parts: dict[int, Fraction] = {}
    for xpow, j, c in poly.terms:
        v = c
        for i in range(k):
            b = xpow[2 * i] + xpow[2 * i + 1]
            v *= L2 ** (b + 1) / (2 * b + 2)
        parts[j] = parts.get(j, Fraction(0)) + v
    scale = Fraction(1, 2**k * math.factorial(k))
    return combine_pi({j: r * scale for j, r in parts.items()})


def _log_power_over_factorial(x: float, k: int) -> float:
    return k * math.log(x) - math.lgamma(k + 1)


def short_tuple_integral_asymptotic(mean: float, k: int) -> float:
    """Leading term mean^k / k! of the normalised k-tuple integral."""
    if mean < 0:
        raise ValueError("mean must be >= 0")
    if k < 1:
        raise ValueError("k must be >= 1")
    if mean == 0:
        return 0.0
    if k <= 170:
        try:
            p = math.pow(mean, k)
        except OverflowError:
            p = math.inf
        if math.isfinite(p):
            return p / math.factorial(k)
    lv = _log_power_over_factorial(mean, k)
    return math.exp(lv) if lv < 709.0 else math.inf


def _safe_exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def effective_terms(g: int, n_terms: int) -> int:
    """n_terms capped at g (rounded down to even), since C(r-1, n) vanishes for n >= g."""
    cap = g if g % 2 == 0 else g - 1
    return min(n_terms, cap)


def systole_prob_estimate(g: int, L: float, n_terms: int,
                          consts: BoundConstants = BoundConstants(),
                          cfg: QuadratureConfig = DEFAULT_QUAD) -> Estimate:
    """Estimate of Vol(N_g^L)/V_g with an explicit error budget.

    value = 1 - e^{-I(L)}.  The budget has two parts:

    * truncation: I^{n+1}/(n+1)! (the Taylor remainder with e^{-xi} <= 1); the
      Stirling form (I e/(n+1))^{n+1}/sqrt(2 pi (n+1)) is reported alongside;
    * volume_ratio: Dprime * e^I * g^{-1+slack}.
    """
    if g < 2:
        raise ValueError("g must be >= 2")
    if n_terms < 2 or n_terms % 2:
        raise ValueError(f"n_terms must be a positive even integer, got {n_terms}")
    if not (L >= 0 and math.isfinite(L)):
        raise ValueError("L must be finite and >= 0")
    mean = expected_count(L, cfg)
    value = -math.expm1(-mean)
    n = effective_terms(g, n_terms)
    if mean == 0:
        truncation = stirling = 0.0
    else:
        truncation = short_tuple_integral_asymptotic(mean, n + 1)
        ls = (n + 1) * (math.log(mean) + 1.0 - math.log(n + 1)) - 0.5 * math.log(2 * math.pi * (n + 1))
        stirling = _safe_exp(ls)
    log_g = math.log(g)
    volume_ratio = consts.Dprime * _safe_exp(mean + (-1.0 + consts.o1_exponent_slack) * log_g)
    budget = truncation + volume_ratio
    terms = {
        "mean_count": mean,
        "n_terms": n,
        "truncation": truncation,
        "stirling_cap": stirling,
        "volume_ratio": volume_ratio,
    }
    return Estimate(value, _clamp01(value - budget), _clamp01(value + budget), terms)


class Regime(enum.Enum):
    """Which asymptotic window (g, L) falls into.

    SHORT_SYSTOLE: L >= (1+eps) loglog g, where the systole is below L w.h.p.
    DISJOINT_COLLARS: L <= log((2-delta) log g), where surfaces whose short
    geodesics carry disjoint wide collars fill almost all volume.
    """

    SHORT_SYSTOLE = "short_systole"
    DISJOINT_COLLARS = "disjoint_collars"
    BOTH = "both"
    NEITHER = "neither"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    witnesses: dict


def regime_classify(g: int, L: float, eps: float, delta: float,
                    cfg: QuadratureConfig = DEFAULT_QUAD) -> RegimeReport:
    if g < 16:
        raise ValueError("regime classification needs g >= 16 so that loglog g > 0")
    if not 0 < delta < 2:
        raise ValueError("delta must lie in (0, 2)")
    if not eps > 0 or not L > 0:
        raise ValueError("eps and L must be positive")
    log_g = math.log(g)
    short_threshold = (1.0 + eps) * math.log(log_g)
    collar_threshold = math.log((2.0 - delta) * log_g)
    short = L >= short_threshold
    collars = L <= collar_threshold
    w: dict = {
        "log_g": log_g,
        "short_systole_threshold": short_threshold,
        "collar_threshold": collar_threshold,
        "half_log_g": 0.5 * log_g,
        "collar_growth_cap": (1.0 - 0.5 * delta) * log_g,
    }
    if L >= 1:
        T = growth(L, cfg)
        lower, upper = growth_bounds(L)
        w.update(
            T=T,
            T_lower=lower,
            T_upper=upper,
            T_exceeds_half_log_g=T > 0.5 * log_g,
            T_within_collar_cap=T <= w["collar_growth_cap"],
            # sufficient condition for T > log(g)/2 read off the elementary lower bound
            lower_bound_exceeds_half_log_g=lower > 0.5 * log_g,
        )
    else:
        w.update(T=None, T_lower=None, T_upper=None, T_exceeds_half_log_g=False,
                 T_within_collar_cap=True, lower_bound_exceeds_half_log_g=False)
    w["threshold_lower_bound"] = threshold_lower_bound(g, eps)
    if short and collars:
        regime = Regime.BOTH
    elif short:
        regime = Regime.SHORT_SYSTOLE
    elif collars:
        regime = Regime.DISJOINT_COLLARS
    else:
        regime = Regime.NEITHER
    return RegimeReport(regime, w)
