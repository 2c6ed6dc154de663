"""Spectra of generalized Fibonacci operators F_n and Fibonacci-like operators G_n on l1."""

__version__ = "0.1.0"

from .charpoly import CharPolynomial, Family, all_roots, dominant_root, point_spectrum, root_count_report
from .errors import (
    BoundaryWarning,
    DomainError,
    FibSpecError,
    NoInteriorMinimum,
    NonConvergence,
    NotAnEigenvalue,
    OutsideResolventSet,
    SingularResolvent,
    TruncationError,
)
from .invasion import InvasionModel, Kernel, lambda_max_gamma5_closed, minimize_speed, speed_objective
from .operators import Kind, OperatorSpec, SeqVector, apply, build_truncation, exact_power_norm
from .sequences import GenFibSequence, norm_of_power, prefix_sum_identity
from .spectra import Part, classify, eigenvector, resolvent_apply_F, resolvent_apply_G

__all__ = [
    "BoundaryWarning",
    "CharPolynomial",
    "DomainError",
    "Family",
    "FibSpecError",
    "GenFibSequence",
    "InvasionModel",
    "Kernel",
    "Kind",
    "NoInteriorMinimum",
    "NonConvergence",
    "NotAnEigenvalue",
    "OperatorSpec",
    "OutsideResolventSet",
    "Part",
    "SeqVector",
    "SingularResolvent",
    "TruncationError",
    "all_roots",
    "apply",
    "build_truncation",
    "classify",
    "dominant_root",
    "eigenvector",
    "exact_power_norm",
    "lambda_max_gamma5_closed",
    "minimize_speed",
    "norm_of_power",
    "point_spectrum",
    "prefix_sum_identity",
    "resolvent_apply_F",
    "resolvent_apply_G",
    "root_count_report",
    "speed_objective",
]
