"""Numerical laboratory for Dales-Davie algebras D(X, M) and their composition operators."""

from .algebra import DNormProfile, composed_norm_profile, d_norm_profile
from .calculus import (SeriesFunction, analyticity_index, compose_series, differentiate,
                       faa_di_bruno, fourier_coefficients, sup_norm)
from .criteria import (ClassifyConfig, DiagnosisReport, check_boundary_necessity,
                       check_derivative_bound, check_interior_mapping, check_mixed_cover, classify)
from .domains import CIRCLE, DISC, INTERVAL, DomainSet
from .maps import (MapBetween, affine, counterexample_interval, explicit, gadget_circle,
                   gadget_disc, identity, monomial, wermer_circle)
from .operator import (OperatorMatrix, assemble_matrix, eigenvalues, find_fixed_point,
                       singular_value_profile, spectrum_check, weighted_normalize)
from .weights import (WeightSequence, entire_order_estimate, non_analyticity_profile,
                      ratio_profile, validate_admissibility)

__version__ = "0.1.0"

__all__ = [
    "DNormProfile",
    "composed_norm_profile",
    "d_norm_profile",
    "SeriesFunction",
    "analyticity_index",
    "compose_series",
    "differentiate",
    "faa_di_bruno",
    "fourier_coefficients",
    "sup_norm",
    "ClassifyConfig",
    "DiagnosisReport",
    "check_boundary_necessity",
    "check_derivative_bound",
    "check_interior_mapping",
    "check_mixed_cover",
    "classify",
    "CIRCLE",
    "DISC",
    "INTERVAL",
    "DomainSet",
    "MapBetween",
    "affine",
    "counterexample_interval",
    "explicit",
    "gadget_circle",
    "gadget_disc",
    "identity",
    "monomial",
    "wermer_circle",
    "OperatorMatrix",
    "assemble_matrix",
    "eigenvalues",
    "find_fixed_point",
    "singular_value_profile",
    "spectrum_check",
    "weighted_normalize",
    "WeightSequence",
    "entire_order_estimate",
    "non_analyticity_profile",
    "ratio_profile",
    "validate_admissibility",
]
