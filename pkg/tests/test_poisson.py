import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wpsys import (SimConfig, SpectrumSample, count_moments, empirical_systole_cdf, expected_count,
                   sample_spectrum, simulate, systole_of)
from wpsys.poisson import InverseCDF, window_mean


def test_config_validation():
    for bad in [dict(trials=0, seed=0, L=1.0), dict(trials=1, seed=-1, L=1.0), dict(trials=1, seed=0, L=0.0),
                dict(trials=1, seed=0, L=1.0, start=1.0), dict(trials=True, seed=0, L=1.0)]:
        with pytest.raises(ValueError):
            SimConfig(**bad)


def test_sample_validation():
    with pytest.raises(ValueError):
        SpectrumSample((2.0, 1.0), 3.0)
    with pytest.raises(ValueError):
        SpectrumSample((1.0, 4.0), 3.0)


def test_systole_of():
    assert systole_of(SpectrumSample((), 1.0)) == math.inf
    assert systole_of(SpectrumSample((2.0, 3.5), 4.0)) == 2.0
    assert systole_of(SpectrumSample((0.7,), 1.0)) == 0.7


def test_deterministic_per_trial():
    cfg = SimConfig(trials=10, seed=99, L=4.0)
    assert sample_spectrum(cfg, 3) == sample_spectrum(cfg, 3)
    other = SimConfig(trials=10_000, seed=99, L=4.0)
    assert sample_spectrum(other, 3) == sample_spectrum(cfg, 3)
    assert sample_spectrum(SimConfig(trials=10, seed=100, L=4.0), 3) != sample_spectrum(cfg, 3)


def test_batched_run_matches_per_trial():
    cfg = SimConfig(trials=300, seed=5, L=3.0)
    run = simulate(cfg, batch=64)
    for i in range(0, 300, 7):
        s = sample_spectrum(cfg, i)
        assert run.counts[i] == len(s.lengths)
        assert run.systoles[i] == systole_of(s)


def test_reproducible_streams():
    cfg = SimConfig(trials=2000, seed=1, L=4.0)
    a, b = simulate(cfg), simulate(cfg)
    assert np.array_equal(a.counts, b.counts) and np.array_equal(a.systoles, b.systoles)
    c = simulate(cfg, batch=333)
    assert np.array_equal(a.systoles, c.systoles)


def test_tiny_window_mostly_empty():
    cfg = SimConfig(trials=2000, seed=2, L=1e-3)
    run = simulate(cfg)
    assert np.count_nonzero(run.counts) <= 2


def test_samples_in_window():
    cfg = SimConfig(trials=500, seed=3, L=2.5)
    for i in range(0, 500, 25):
        s = sample_spectrum(cfg, i)
        assert all(0 < x <= 2.5 for x in s.lengths)


def test_inverse_cdf_accuracy():
    inv = InverseCDF(0.0, 5.0, 4096)
    u = np.linspace(1e-6, 1.0, 41)
    x = inv(u)
    assert np.all(np.diff(x) > 0)
    got = np.array([expected_count(v) for v in x]) / expected_count(5.0)
    assert np.max(np.abs(got - u)) < 1e-8


def test_cdf_properties():
    cfg = SimConfig(trials=5000, seed=4, L=4.0)
    run = simulate(cfg)
    pts = np.linspace(1e-4, 4.0, 40)
    cdf = empirical_systole_cdf(cfg, pts, run)
    fr = [p for _, p, _ in cdf]
    assert all(b >= a for a, b in zip(fr, fr[1:]))
    assert fr[0] < 0.01
    with pytest.raises(ValueError):
        empirical_systole_cdf(cfg, [5.0], run)


def test_single_trial_variance_zero():
    assert count_moments(SimConfig(trials=1, seed=0, L=3.0))[1] == 0.0


def test_mean_grows_with_window():
    a = count_moments(SimConfig(trials=3000, seed=8, L=2.0))[0]
    b = count_moments(SimConfig(trials=3000, seed=8, L=4.0))[0]
    assert b > a


def test_superposition():
    trials, a, L = 20_000, 2.0, 4.0
    lower = simulate(SimConfig(trials, 11, a)).counts
    upper = simulate(SimConfig(trials, 12, L, start=a)).counts
    whole = simulate(SimConfig(trials, 13, L)).counts
    split = lower + upper
    diff = split.mean() - whole.mean()
    se = math.sqrt(split.var(ddof=1) / trials + whole.var(ddof=1) / trials)
    assert abs(diff) <= 3 * se
    assert window_mean(SimConfig(1, 0, L, start=a)) == pytest.approx(expected_count(L) - expected_count(a), rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2**64 - 1), st.integers(min_value=0, max_value=10**9))
def test_any_seed_and_trial(seed, trial):
    s = sample_spectrum(SimConfig(trials=1, seed=seed, L=2.0, inversion_grid=256), trial)
    assert all(0 < x <= 2.0 for x in s.lengths)
