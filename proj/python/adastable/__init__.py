"""Stable-law densities, moment estimators and adaptive tracking of heavy-tailed series."""

from ._core import (
    AccuracyError,
    DegenerateSampleError,
    InputError,
    StableParams,
    StepError,
    TrackerConfig,
    adaptive_hurst,
    cdf,
    count_extreme,
    estimate_alpha,
    estimate_mu,
    estimate_sigma,
    exceedance_curve,
    fit_static_sigma,
    garch11_fit,
    gaussianize,
    jarque_bera,
    logpdf,
    moment_constant,
    pdf,
    sample,
    sf,
    structure_function,
    sweep_fixed_alpha,
    track,
)

__all__ = [
    "AccuracyError",
    "DegenerateSampleError",
    "InputError",
    "StableParams",
    "StepError",
    "TrackerConfig",
    "adaptive_hurst",
    "cdf",
    "count_extreme",
    "estimate_alpha",
    "estimate_mu",
    "estimate_sigma",
    "exceedance_curve",
    "fit_static_sigma",
    "garch11_fit",
    "gaussianize",
    "jarque_bera",
    "logpdf",
    "moment_constant",
    "pdf",
    "sample",
    "sf",
    "structure_function",
    "sweep_fixed_alpha",
    "track",
]
