import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import expi, shichi

from wpsys import (count_below_one, critical_length, expected_count, growth, growth_bounds, growth_inverse,
                   intensity, threshold_lower_bound)
from wpsys.quadrature import QuadratureConfig
from wpsys.errors import ToleranceNotMet

EULER_GAMMA = 0.57721566490153286


def chi_oracle(L):
    # int_0^L (cosh x - 1)/x dx = Chi(L) - gamma - ln L
    return shichi(L)[1] - EULER_GAMMA - math.log(L)


def ei_oracle(L):
    return 0.5 * (expi(L) - expi(1.0))


def test_intensity_values():
    assert intensity(0.0) == 0.0
    assert intensity(1.0) == pytest.approx((math.e + 1 / math.e - 2) / 2, rel=1e-15)
    with pytest.raises(ValueError):
        intensity(-1e-3)


def test_intensity_series_and_direct_agree_at_switch():
    for l in [0.3, 0.49, 0.5, 0.51]:
        direct = (math.cosh(l) - 1) / l
        assert intensity(l) == pytest.approx(direct, rel=1e-14)
    l = 0.4999999
    series = intensity(l)
    assert series == pytest.approx(math.expm1(l) ** 2 / (2 * l * math.exp(l)), rel=1e-15)


def test_intensity_array_matches_scalar():
    xs = np.linspace(0, 12, 97)
    arr = intensity(xs)
    assert all(arr[i] == intensity(float(x)) for i, x in enumerate(xs))


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=10.0))
def test_intensity_above_half_l(l):
    assert intensity(l) >= l / 2


@pytest.mark.parametrize("L", [1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0])
def test_expected_count_oracle(L):
    assert expected_count(L) == pytest.approx(chi_oracle(L), rel=1e-10)


@pytest.mark.parametrize("L", [1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 40.0])
def test_growth_oracle(L):
    assert growth(L) == pytest.approx(ei_oracle(L), rel=1e-10)


def test_small_length_series_law():
    # (I(l) - l^2/4)/(l^2/4) = l^2/24 + l^4/1080 + O(l^6)
    for l in [0.01, 0.05, 0.1, 0.2]:
        rel = expected_count(l) / (l * l / 4) - 1
        assert rel == pytest.approx(l**2 / 24 + l**4 / 1080, rel=1e-4)


def test_zero_and_unit():
    assert expected_count(0.0) == 0.0
    assert growth(1.0) == 0.0
    assert growth_inverse(0.0) == 1.0
    c = count_below_one()
    assert c == expected_count(1.0)
    assert 0.25 < c < 0.25 + 1 / 24


def test_growth_domain():
    with pytest.raises(ValueError):
        growth(0.5)
    with pytest.raises(ValueError):
        critical_length(1)


def test_monotone_on_dense_grids():
    Ls = np.linspace(0.0, 15.0, 301)
    I = [expected_count(L) for L in Ls]
    assert all(b > a for a, b in zip(I, I[1:]))
    Ts = [growth(L) for L in np.linspace(1.0, 15.0, 301)]
    assert all(b > a for a, b in zip(Ts, Ts[1:]))
    Ys = np.linspace(0.0, 50.0, 101)
    inv = [growth_inverse(y) for y in Ys]
    assert all(b > a for a, b in zip(inv, inv[1:]))


def test_sandwich_and_growth_bounds():
    C = count_below_one()
    for L in np.linspace(2.0, 30.0, 57):
        T, I = growth(L), expected_count(L)
        assert T - math.log(L) + C <= I <= T + C
        lo, hi = growth_bounds(L)
        assert lo <= T <= hi


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.0, max_value=200.0))
def test_inverse_round_trip(y):
    L = growth_inverse(y)
    assert abs(growth(L) - y) <= max(1e-12, 1e-10 * y)


@pytest.mark.parametrize("L", [2.0, 5.0, 10.0])
def test_inverse_of_forward(L):
    assert growth_inverse(growth(L)) == pytest.approx(L, abs=1e-8)


def test_critical_length():
    assert critical_length(math.exp(2 * growth(2.0))) == pytest.approx(2.0, abs=1e-9)
    Ls = [critical_length(10**k) for k in range(1, 10)]
    assert all(b >= a for a, b in zip(Ls, Ls[1:]))
    assert math.isfinite(critical_length(10**300))
    assert math.isfinite(critical_length(10**1000))


def test_inverse_out_of_range():
    with pytest.raises(ToleranceNotMet):
        growth_inverse(1e308)


def test_inverse_tolerance_floor():
    # an absolute tolerance below the spacing of doubles near L cannot be met
    cfg = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-300)
    with pytest.raises(ToleranceNotMet):
        growth_inverse(7.0, cfg)


def test_threshold_scan():
    """Smallest decade g = 10^k with T(1.5 lnln g) > ln(g)/2, and where the elementary bound certifies it."""
    eps = 0.5
    observed, certified = [], []
    for k in range(2, 120):
        g = 10**k
        L = (1 + eps) * math.log(math.log(g))
        half = 0.5 * math.log(g)
        T = growth(L)
        assert threshold_lower_bound(g, eps) <= T
        observed.append(T > half)
        certified.append(threshold_lower_bound(g, eps) > half)
    g_obs = 2 + observed.index(True)
    g_cert = 2 + certified.index(True)
    assert all(observed[g_obs - 2:]) and all(certified[g_cert - 2:])
    assert (g_obs, g_cert) == (3, 11)
