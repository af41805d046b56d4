"""Poisson model of the short length spectrum.

Lengths below L form a Poisson process on (start, L] with intensity
lambda(l) = (cosh l - 1)/l.  Each trial draws N ~ Poisson(Lambda) and then N
lengths by inverting the normalised cumulative intensity.

Trial ``i`` of a run with seed ``s`` uses its own Philox stream keyed by
(s, i), so a trial's sample does not depend on how many other trials run or
in what order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .quadrature import DEFAULT_QUAD, NODES, KRONROD_W
from .spectral import expected_count, intensity

_MASK64 = (1 << 64) - 1
# fixed 8-point Gauss-Legendre rule for partial-cell integrals during refinement
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_REFINE_STEPS = 6


@dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int
    L: float
    inversion_grid: int = 4096
    start: float = 0.0

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, int) or self.trials < 1:
            raise ValueError("trials must be a positive integer")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError("L must be positive and finite")
        if not 0 <= self.start < self.L:
            raise ValueError("need 0 <= start < L")
        if self.inversion_grid < 1:
            raise ValueError("inversion_grid must be >= 1")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SpectrumSample:
    lengths: tuple[float, ...]
    L: float

    def __post_init__(self):
        ls = self.lengths
        if any(b < a for a, b in zip(ls, ls[1:])):
            raise ValueError("lengths must be sorted")
        if ls and not (ls[0] > 0 and ls[-1] <= self.L):
            raise ValueError("lengths must lie in (0, L]")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed & _MASK64) | (trial << 64)))


class InverseCDF:
    """Cumulative intensity on a uniform grid plus bracketed Newton refinement inside a cell."""

    def __init__(self, start: float, L: float, grid: int):
        self.start, self.L, self.grid = start, L, grid
        self.edges = np.linspace(start, L, grid + 1)
        lo, hi = self.edges[:-1], self.edges[1:]
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        pts = mid[:, None] + half[:, None] * NODES[None, :]
        cell = half * (intensity(pts) @ KRONROD_W)
        self.cum = np.concatenate([[0.0], np.cumsum(cell)])
        self.total = float(self.cum[-1])

    def _partial(self, a: np.ndarray, x: np.ndarray) -> np.ndarray:
        half, mid = 0.5 * (x - a), 0.5 * (x + a)
        pts = mid[:, None] + half[:, None] * _GL_X[None, :]
        return half * (intensity(pts) @ _GL_W)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        """Map u in (0, 1] to lengths in (start, L]."""
        u = np.asarray(u, dtype=float)
        if u.size == 0:
            return u.copy()
        target = u * self.total
        idx = np.clip(np.searchsorted(self.cum, target, side="left") - 1, 0, self.grid - 1)
        a = self.edges[idx]
        lo, hi = a.copy(), self.edges[idx + 1].copy()
        resid = target - self.cum[idx]
        width = hi - lo
        # linear start, then Newton steps kept inside the bracket (bisect when a step leaves it)
        x = lo + width * np.clip(resid / np.maximum(self.cum[idx + 1] - self.cum[idx], 1e-300), 0.0, 1.0)
        for _ in range(_REFINE_STEPS):
            r = self._partial(a, x) - resid
            lo = np.where(r < 0, x, lo)
            hi = np.where(r < 0, hi, x)
            dens = intensity(x)
            step = np.where(dens > 0, x - r / np.where(dens > 0, dens, 1.0), 0.5 * (lo + hi))
            x = np.where((step >= lo) & (step <= hi), step, 0.5 * (lo + hi))
        # keep the open end open and the closed end closed
        x = np.where(x <= self.start, np.nextafter(self.start, np.inf), x)
        return np.minimum(x, self.L)


@lru_cache(maxsize=16)
def _sampler(start: float, L: float, grid: int) -> tuple[InverseCDF, float]:
    inv = InverseCDF(start, L, grid)
    mean = expected_count(L, DEFAULT_QUAD) - (expected_count(start, DEFAULT_QUAD) if start > 0 else 0.0)
    return inv, mean


def window_mean(cfg: SimConfig) -> float:
    """Expected count on (start, L]."""
    return _sampler(cfg.start, cfg.L, cfg.inversion_grid)[1]


def _draw_uniforms(cfg: SimConfig, trials) -> tuple[np.ndarray, np.ndarray]:
    mean = window_mean(cfg)
    counts = np.empty(len(trials), dtype=np.int64)
    chunks = []
    for i, t in enumerate(trials):
        rng = trial_rng(cfg.seed, int(t))
        c = rng.poisson(mean)
        counts[i] = c
        chunks.append(1.0 - rng.random(c))
    u = np.concatenate(chunks) if chunks else np.empty(0)
    return counts, u


def sample_spectrum(cfg: SimConfig, trial: int) -> SpectrumSample:
    """The spectrum of trial ``trial``; a pure function of (cfg, trial)."""
    if trial < 0:
        raise ValueError("trial index must be >= 0")
    inv = _sampler(cfg.start, cfg.L, cfg.inversion_grid)[0]
    _, u = _draw_uniforms(cfg, [trial])
    lengths = np.sort(inv(u))
    return SpectrumSample(tuple(float(x) for x in lengths), cfg.L)


def systole_of(s: SpectrumSample) -> float:
    """Shortest length, or +inf for an empty sample."""
    return s.lengths[0] if s.lengths else math.inf


@dataclass(frozen=True)
class RunSummary:
    counts: np.ndarray
    systoles: np.ndarray


def simulate(cfg: SimConfig, batch: int = 8192) -> RunSummary:
    """Per-trial counts and systoles for trials 0..trials-1.

    Draws are batched for vectorised inversion; results are identical to
    calling ``sample_spectrum`` trial by trial.
    """
    inv = _sampler(cfg.start, cfg.L, cfg.inversion_grid)[0]
    counts = np.empty(cfg.trials, dtype=np.int64)
    systoles = np.empty(cfg.trials)
    for b0 in range(0, cfg.trials, batch):
        idx = range(b0, min(cfg.trials, b0 + batch))
        c, u = _draw_uniforms(cfg, idx)
        x = inv(u)
        counts[b0:b0 + len(idx)] = c
        sys_b = np.full(len(idx), math.inf)
        nonempty = c > 0
        if nonempty.any():
            offsets = np.concatenate([[0], np.cumsum(c)[:-1]])
            sys_b[nonempty] = np.minimum.reduceat(x, offsets[nonempty])
        systoles[b0:b0 + len(idx)] = sys_b
    return RunSummary(counts, systoles)


def empirical_systole_cdf(cfg: SimConfig, eval_points, summary: RunSummary | None = None) -> list[tuple[float, float, float]]:
    """[(t, fraction of trials with systole <= t, binomial standard error)]."""
    pts = [float(t) for t in eval_points]
    if any(not (cfg.start < t <= cfg.L) for t in pts):
        raise ValueError(f"evaluation points must lie in ({cfg.start}, {cfg.L}]")
    summary = summary or simulate(cfg)
    n = len(summary.systoles)
    out = []
    for t in pts:
        p = float(np.count_nonzero(summary.systoles <= t)) / n
        out.append((t, p, math.sqrt(p * (1.0 - p) / n)))
    return out


def count_moments(cfg: SimConfig, summary: RunSummary | None = None) -> tuple[float, float]:
    """Sample mean and (unbiased) variance of the spectrum size; variance is 0 for one trial."""
    summary = summary or simulate(cfg)
    c = summary.counts.astype(float)
    mean = math.fsum(c) / len(c)
    if len(c) == 1:
        return mean, 0.0
    var = math.fsum((c - mean) ** 2) / (len(c) - 1)
    return mean, var
