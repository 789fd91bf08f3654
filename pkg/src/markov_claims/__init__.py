"""Aggregate-claims distributions for a three-state absorbing health chain.

Exact engines for the n-period payout law, signed compound Poisson
approximations recovered by characteristic-function inversion, distance
computations, and a verification harness for the associated error bounds.
"""

from .charfn import (BranchError, DegenerateNodeError, approx_transforms,
                     base_transforms, correction_transforms, perron_charfn,
                     spectral_parts, sqrt_disc, transform_by_name)
from .exact import (SupportCapError, exact_charfn, exact_distribution_dp,
                    exact_distribution_enum, sample_empirical)
from .inversion import (AliasingRecord, ApproxVariant, ConvergenceError,
                        aliasing_probe, approximation_measure, assemble_transform,
                        invert_grid, midpoint_grid)
from .measures import LatticeMeasure, from_atoms, unit_atom
from .model import (ConditionError, ModelParams, State, condition_violations,
                    fourier_transition_matrix, transition_matrix, validate)
from .norms import (InversionBounds, NormReport, df_value, inversion_bounds,
                    kolmogorov_norm, local_norm, nonuniform_sequences,
                    norm_report, tv_norm)
from .verify import (ApproxError, BoundCheck, EnvelopeCheck, HypothesisError,
                     RateFit, approximation_error, check_bound, default_box,
                     empirical_constant, exact_constant_suite, fitted_suite,
                     nonuniform_envelopes, rate_fit)

__version__ = "0.1.0"

__all__ = [
    "AliasingRecord", "ApproxError", "ApproxVariant", "BoundCheck",
    "BranchError", "ConditionError", "ConvergenceError", "DegenerateNodeError",
    "EnvelopeCheck", "HypothesisError", "InversionBounds", "LatticeMeasure",
    "ModelParams", "NormReport", "RateFit", "State", "SupportCapError",
    "aliasing_probe", "approx_transforms", "approximation_error",
    "approximation_measure", "assemble_transform", "base_transforms",
    "check_bound", "condition_violations", "correction_transforms",
    "default_box", "df_value", "empirical_constant", "exact_charfn",
    "exact_constant_suite", "exact_distribution_dp", "exact_distribution_enum",
    "fitted_suite", "fourier_transition_matrix", "from_atoms",
    "inversion_bounds", "invert_grid", "kolmogorov_norm", "local_norm",
    "midpoint_grid", "nonuniform_envelopes", "nonuniform_sequences",
    "norm_report", "perron_charfn", "rate_fit", "sample_empirical",
    "spectral_parts", "sqrt_disc", "transform_by_name", "transition_matrix",
    "tv_norm", "unit_atom", "validate",
]
