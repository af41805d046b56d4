"""Weil-Petersson volumes, short-geodesic statistics and systole estimates for random surfaces."""

from .errors import ArityMismatch, EmptyRange, ToleranceNotMet, UnknownType
from .estimators import (BoundConstants, Estimate, Regime, RegimeReport, binomial_ie_identity,
                         inclusion_exclusion_partial, regime_classify, short_tuple_integral_asymptotic,
                         short_tuple_integral_exact, systole_prob_estimate)
from .multicurve import (MultiCurveSpec, Piece, SplittingClass, case_bounds, case_table, collar_defect_bound,
                         enumerate_splittings, mirzakhani_rhs, one_handle_flag, separating_bound,
                         simplex_moment, simplex_volume)
from .poisson import (SimConfig, SpectrumSample, count_moments, empirical_systole_cdf, sample_spectrum,
                      simulate, systole_of)
from .quadrature import DEFAULT_QUAD, QuadratureConfig, integrate, integrate_cube
from .spectral import (count_below_one, critical_length, expected_count, growth, growth_bounds,
                       growth_inverse, intensity, threshold_lower_bound)
from .wp_poly import (PolyTable, SurfaceType, VolumePolynomial, base_volume, const_volume, default_table,
                      evaluate, load_table, sinh_ratio_bound)

__all__ = [
    "ArityMismatch",
    "EmptyRange",
    "ToleranceNotMet",
    "UnknownType",
    "BoundConstants",
    "Estimate",
    "Regime",
    "RegimeReport",
    "binomial_ie_identity",
    "inclusion_exclusion_partial",
    "regime_classify",
    "short_tuple_integral_asymptotic",
    "short_tuple_integral_exact",
    "systole_prob_estimate",
    "MultiCurveSpec",
    "Piece",
    "SplittingClass",
    "case_bounds",
    "case_table",
    "collar_defect_bound",
    "enumerate_splittings",
    "mirzakhani_rhs",
    "one_handle_flag",
    "separating_bound",
    "simplex_moment",
    "simplex_volume",
    "SimConfig",
    "SpectrumSample",
    "count_moments",
    "empirical_systole_cdf",
    "sample_spectrum",
    "simulate",
    "systole_of",
    "DEFAULT_QUAD",
    "QuadratureConfig",
    "integrate",
    "integrate_cube",
    "count_below_one",
    "critical_length",
    "expected_count",
    "growth",
    "growth_bounds",
    "growth_inverse",
    "intensity",
    "threshold_lower_bound",
    "PolyTable",
    "SurfaceType",
    "VolumePolynomial",
    "base_volume",
    "const_volume",
    "default_table",
    "evaluate",
    "load_table",
    "sinh_ratio_bound",
]
