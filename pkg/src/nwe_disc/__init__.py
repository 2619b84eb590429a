"""Discrimination of symmetric product ensembles.

Minimum-error discrimination through the square-root measurement,
unambiguous discrimination through a small semidefinite program, the
two-round local protocol, and the product-vector analysis showing the
optimal minimum-error basis is not LOCC distinguishable.
"""

from .ensembles import (
    Ensemble,
    gram_matrix,
    linear_independence_check,
    make_double_trine,
    make_product_family,
    make_symmetric_states,
    reciprocal_states,
    trine_states,
)
from .errors import (
    AmbiguityError,
    DegeneracyError,
    DiscriminationError,
    DomainError,
    InfeasibleError,
    NumericError,
    SpanError,
    ValidationError,
)
from .minerr import (
    Povm,
    build_srm,
    chen_analysis,
    error_probability,
    product_family_srm,
    srm_optimality_check,
    success_probability,
)
from .numerics import hermitian_eig, inv_sqrtm_psd, schmidt_decompose, sqrtm_psd
from .unambig import (
    build_reciprocal_povm,
    check_dual_certificate,
    equiprobable_optimum,
    monte_carlo_protocol,
    sequential_protocol_exact,
    solve_ud_primal,
    ud_condition_check,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError",
    "DegeneracyError",
    "DiscriminationError",
    "DomainError",
    "Ensemble",
    "InfeasibleError",
    "NumericError",
    "Povm",
    "SpanError",
    "ValidationError",
    "build_reciprocal_povm",
    "build_srm",
    "chen_analysis",
    "check_dual_certificate",
    "equiprobable_optimum",
    "error_probability",
    "gram_matrix",
    "hermitian_eig",
    "inv_sqrtm_psd",
    "linear_independence_check",
    "make_double_trine",
    "make_product_family",
    "make_symmetric_states",
    "monte_carlo_protocol",
    "product_family_srm",
    "reciprocal_states",
    "schmidt_decompose",
    "sequential_protocol_exact",
    "solve_ud_primal",
    "sqrtm_psd",
    "srm_optimality_check",
    "success_probability",
    "trine_states",
    "ud_condition_check",
]
