"""Exact Weil-Petersson volume polynomials for surfaces of small complexity.

A volume polynomial V_{g,n}(x_1, ..., x_n) is stored as a map

    (a_1, ..., a_n, j)  ->  rational coefficient of  pi^{2j} * prod x_i^{2 a_i}

and is only turned into floating point at evaluation time.  The shipped table
(``data/wp_table.json``) is produced by ``scripts/build_wp_table.py`` and is
read-only here.  The environment variable ``WPSYS_TABLE`` points the loader at
a different file.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ArityMismatch, UnknownType

TABLE_VERSION = 1
TABLE_ENV = "WPSYS_TABLE"

# math.pi as an exact rational; every float result goes through this value once.
PI_Q = Fraction(math.pi)


@dataclass(frozen=True, order=True)
class SurfaceType:
    """Topological type (genus, number of boundary components)."""

    genus: int
    boundaries: int

    def __post_init__(self):
        for name in ("genus", "boundaries"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.complexity < 1:
            raise ValueError(f"S_{{{self.genus},{self.boundaries}}} is not hyperbolic (2g-2+n < 1)")

    @property
    def complexity(self) -> int:
        """|chi| = 2g - 2 + n."""
        return 2 * self.genus - 2 + self.boundaries

    @property
    def euler_characteristic(self) -> int:
        return -self.complexity

    @property
    def dimension(self) -> int:
        """Top total degree 6g - 6 + 2n of the volume polynomial."""
        return 6 * self.genus - 6 + 2 * self.boundaries

    def __str__(self) -> str:
        return f"({self.genus},{self.boundaries})"


Key = tuple[tuple[int, ...], int]


@dataclass(frozen=True)
class VolumePolynomial:
    surface: SurfaceType
    terms: tuple[tuple[tuple[int, ...], int, Fraction], ...]
    _float_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @classmethod
    def from_mapping(cls, surface: SurfaceType, coeffs: Mapping[Key, Fraction]) -> "VolumePolynomial":
        items = []
        for (xpow, j), c in coeffs.items():
            c = Fraction(c)
            if c:
                items.append((tuple(int(a) for a in xpow), int(j), c))
        items.sort(key=lambda t: (t[0], t[1]))
        poly = cls(surface, tuple(items))
        poly._check()
        return poly

    def _check(self):
        n = self.surface.boundaries
        top = 0
        for xpow, j, c in self.terms:
            if len(xpow) != n:
                raise ValueError(f"term {xpow} has wrong arity for {self.surface}")
            if j < 0 or min(xpow, default=0) < 0:
                raise ValueError("negative exponent in volume polynomial")
            if c < 0:
                raise ValueError("volume polynomial coefficients are nonnegative")
            top = max(top, 2 * sum(xpow) + 2 * j)
        if self.terms and top != self.surface.dimension:
            raise ValueError(f"top degree {top} != {self.surface.dimension} for {self.surface}")

    @property
    def arity(self) -> int:
        return self.surface.boundaries

    @property
    def degree(self) -> int:
        return max((2 * sum(a) + 2 * j for a, j, _ in self.terms), default=0)

    def coefficients(self) -> dict[Key, Fraction]:
        return {(a, j): c for a, j, c in self.terms}

    def exact_parts(self, lengths: Sequence) -> dict[int, Fraction]:
        """Exact value split by pi power: {j: R_j} with V = sum_j R_j pi^{2j}."""
        xs = _as_exact_lengths(lengths, self.arity)
        sq = [x * x for x in xs]
        out: dict[int, Fraction] = {}
        for xpow, j, c in self.terms:
            v = c
            for s, a in zip(sq, xpow):
                if a:
                    v *= s**a
            out[j] = out.get(j, Fraction(0)) + v
        return out

    def float_terms(self) -> tuple[np.ndarray, np.ndarray]:
        """(exponents of x_i^2, float coefficients incl. pi) for fast array evaluation."""
        if "arrays" not in self._float_cache:
            exps = np.array([a for a, _, _ in self.terms], dtype=np.int64).reshape(len(self.terms), self.arity)
            coefs = np.array([float(c * PI_Q ** (2 * j)) for _, j, c in self.terms])
            self._float_cache["arrays"] = (exps, coefs)
        return self._float_cache["arrays"]

    def evaluate_array(self, x: np.ndarray) -> np.ndarray:
        """Floating-point evaluation on points of shape (..., n); used inside quadrature."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.arity:
            raise ArityMismatch(f"expected {self.arity} lengths, got {x.shape[-1]}")
        exps, coefs = self.float_terms()
        if self.arity == 0:
            return np.full(x.shape[:-1], coefs.sum())
        powers = np.prod((x * x)[..., None, :] ** exps, axis=-1)
        return powers @ coefs

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for xpow, j, c in sorted(self.terms, key=lambda t: (-2 * sum(t[0]), t[0], t[1])):
            factors = []
            if j:
                factors.append("pi^%d" % (2 * j))
            factors += [f"x{i + 1}^{2 * a}" for i, a in enumerate(xpow) if a]
            coef = str(c)
            parts.append("*".join([coef] + factors) if (factors and c != 1) else ("*".join(factors) or coef))
        return " + ".join(parts)


def _as_exact_lengths(lengths: Sequence, arity: int) -> list[Fraction]:
    xs = list(lengths)
    if len(xs) != arity:
        raise ArityMismatch(f"expected {arity} lengths, got {len(xs)}")
    out = []
    for x in xs:
        if isinstance(x, float) and not math.isfinite(x):
            raise ValueError(f"length must be finite, got {x}")
        q = Fraction(x)
        if q < 0:
            raise ValueError(f"length must be nonnegative, got {x}")
        out.append(q)
    return out


def combine_pi(parts: Mapping[int, Fraction]) -> float:
    """sum_j R_j pi^{2j} evaluated exactly with PI_Q, rounded once."""
    total = sum((r * PI_Q ** (2 * j) for j, r in parts.items()), Fraction(0))
    return float(total)


@dataclass(frozen=True)
class PolyTable:
    entries: Mapping[SurfaceType, VolumePolynomial]
    m_max: int
    version: int = TABLE_VERSION
    source: str = ""

    def __post_init__(self):
        for required in (SurfaceType(0, 3), SurfaceType(1, 1)):
            if required not in self.entries:
                raise ValueError(f"volume table must contain {required}")

    def __contains__(self, t) -> bool:
        return _coerce_type(t) in self.entries

    def __getitem__(self, t) -> VolumePolynomial:
        t = _coerce_type(t)
        try:
            return self.entries[t]
        except KeyError:
            raise UnknownType(
                f"no volume polynomial for {t}; the table covers complexity <= {self.m_max} (M_max)"
            ) from None

    def types(self) -> list[SurfaceType]:
        return sorted(self.entries, key=lambda t: (t.complexity, t.genus, t.boundaries))

    @classmethod
    def from_dict(cls, doc: Mapping, source: str = "") -> "PolyTable":
        if doc.get("version") != TABLE_VERSION:
            raise ValueError(f"unsupported table version {doc.get('version')!r}")
        entries = {}
        for e in doc["entries"]:
            t = SurfaceType(_strict_int(e["g"]), _strict_int(e["n"]))
            coeffs: dict[Key, Fraction] = {}
            for term in e["terms"]:
                den = _strict_int(term["den"])
                if den <= 0:
                    raise ValueError("denominators must be positive")
                key = (tuple(_strict_int(a) for a in term["xpow"]), _strict_int(term["pi2pow"]))
                coeffs[key] = coeffs.get(key, Fraction(0)) + Fraction(_strict_int(term["num"]), den)
            entries[t] = VolumePolynomial.from_mapping(t, coeffs)
        return cls(entries, m_max=_strict_int(doc["m_max"]), version=doc["version"], source=source)

    def to_dict(self) -> dict:
        out = []
        for t in self.types():
            terms = [
                {"xpow": list(a), "pi2pow": j, "num": c.numerator, "den": c.denominator}
                for a, j, c in self.entries[t].terms
            ]
            out.append({"g": t.genus, "n": t.boundaries, "terms": terms})
        return {"version": self.version, "m_max": self.m_max, "entries": out}


def _strict_int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"table values must be exact integers, got {v!r}")
    return v


def _coerce_type(t) -> SurfaceType:
    if isinstance(t, SurfaceType):
        return t
    g, n = t
    return SurfaceType(g, n)


def load_table(path: str | os.PathLike | None = None) -> PolyTable:
    """Load a table from ``path``, else ``$WPSYS_TABLE``, else the packaged file."""
    if path is None:
        path = os.environ.get(TABLE_ENV) or None
    if path is None:
        text = resources.files("wpsys").joinpath("data/wp_table.json").read_text()
        return PolyTable.from_dict(json.loads(text), source="<packaged>")
    p = Path(path)
    return PolyTable.from_dict(json.loads(p.read_text()), source=str(p))


@lru_cache(maxsize=8)
def _cached_table(key: str | None) -> PolyTable:
    return load_table(key)


def default_table() -> PolyTable:
    return _cached_table(os.environ.get(TABLE_ENV) or None)


def base_volume(t, table: PolyTable | None = None) -> VolumePolynomial:
    return (table or default_table())[t]


def evaluate(p: VolumePolynomial, lengths: Sequence) -> float:
    """V(x) with exact rational accumulation and one final rounding."""
    return combine_pi(p.exact_parts(lengths))


def const_volume(t, table: PolyTable | None = None) -> float:
    p = base_volume(t, table)
    return evaluate(p, [0] * p.arity)


def sinhc(u):
    """sinh(u)/u with the removable singularity filled in."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-4
    safe = np.where(small, 1.0, u)
    big = np.sinh(safe) / safe
    series = 1.0 + u * u / 6.0 + u**4 / 120.0
    out = np.where(small, series, big)
    return float(out) if out.ndim == 0 else out


def sinh_ratio_bound(t, lengths: Iterable[float], table: PolyTable | None = None) -> float:
    """V_{g,n} * prod sinh(x_i/2)/(x_i/2), an upper bound for V_{g,n}(x)."""
    p = base_volume(t, table)
    xs = [float(x) for x in lengths]
    if len(xs) != p.arity:
        raise ArityMismatch(f"expected {p.arity} lengths, got {len(xs)}")
    if any(x < 0 or not math.isfinite(x) for x in xs):
        raise ValueError("lengths must be finite and nonnegative")
    out = const_volume(t, table)
    for x in xs:
        out *= sinhc(x / 2.0)
    return out
