"""Temporal collaboration networks: degree snapshots, heavy-tail model fitting
and constrained growth simulation."""

__version__ = "0.1.0"

from .binning import AdaptiveHistogram, build_adaptive_bins, empirical_cdf, pdf_from_cdf
from .compare import (chi_squared, compare_fits, cutoff_degree, flattening_excess,
                      rank_models, scaling_regression)
from .errors import CollabnetError, InputError, NumericalError
from .events import CollaborationEvent, parse_events, read_events
from .fitters import (FAMILIES, FitResult, ModelParams, fit_all, fit_log_normal,
                      fit_power_law, fit_power_law_mle, fit_weibull, select_x_min)
from .growth import GrowthConfig, attachment_weight, integrate_mean_growth, simulate_growth
from .temporal import DegreeSample, TemporalGraph, cohort_of, degree_snapshot

__all__ = [
    "AdaptiveHistogram", "CollabnetError", "CollaborationEvent", "DegreeSample", "FAMILIES",
    "FitResult", "GrowthConfig", "InputError", "ModelParams", "NumericalError",
    "TemporalGraph", "attachment_weight", "build_adaptive_bins", "chi_squared",
    "cohort_of", "compare_fits", "cutoff_degree", "degree_snapshot", "empirical_cdf",
    "fit_all", "fit_log_normal", "fit_power_law", "fit_power_law_mle", "fit_weibull",
    "flattening_excess", "integrate_mean_growth", "parse_events", "pdf_from_cdf",
    "rank_models", "read_events", "scaling_regression", "select_x_min", "simulate_growth",
]
