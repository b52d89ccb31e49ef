"""Ferromagnetic 2-spin systems: exact counting oracle, uniqueness thresholds,
self-avoiding-walk trees, contraction certificates, and the deterministic
approximation of the partition function."""

from ._twospin import (
    ApproxResult,
    FiveSevenReport,
    FixedPoint,
    FixedPointSet,
    MarginalBounds,
    MixingRun,
    ParseError,
    PerDegreeMax,
    Phi3Certificate,
    RegimeError,
    SpinParams,
    SpinSystem,
    ThresholdReport,
    approx_marginal,
    approx_partition,
    boundary_field,
    compute_alpha_lambda,
    compute_thresholds,
    delta_c,
    exact_marginal,
    exact_partition,
    exact_ratio,
    fixed_points,
    five_seven_demo,
    fixed_points_composed,
    lambda_c,
    make_phi3_certificate,
    mixing_decay,
    saw_ratio,
    uniqueness_at_degree,
)

__all__ = [
    "ApproxResult",
    "FiveSevenReport",
    "FixedPoint",
    "FixedPointSet",
    "MarginalBounds",
    "MixingRun",
    "ParseError",
    "PerDegreeMax",
    "Phi3Certificate",
    "RegimeError",
    "SpinParams",
    "SpinSystem",
    "ThresholdReport",
    "approx_marginal",
    "approx_partition",
    "boundary_field",
    "compute_alpha_lambda",
    "compute_thresholds",
    "delta_c",
    "exact_marginal",
    "exact_partition",
    "exact_ratio",
    "fixed_points",
    "five_seven_demo",
    "fixed_points_composed",
    "lambda_c",
    "make_phi3_certificate",
    "mixing_decay",
    "saw_ratio",
    "uniqueness_at_degree",
]
