"""Artin-Tate decompositions of quadric bundle motives, checked by point counts over finite fields."""

from .config import RunConfig, load_config, parse_config
from .engine import (
    CoverDescriptor,
    DecompositionResult,
    assemble_decomposition,
    clifford_cover,
    smooth_quadric_motive,
    stratum_motive,
)
from .errors import (
    ConfigError,
    DomainError,
    PreconditionError,
    QuadBundleError,
    StratificationGapError,
    UnsupportedCharacteristicError,
)
from .quadform import QuadraticFormFiber, corank, descend, signed_discriminant, smooth_over_Z_check
from .strata import (
    BaseRing,
    QuadraticFamily,
    Stratification,
    build_stratification,
    corank_census,
    regularity_check,
)
from .verify import (
    betti_table,
    count_quadric_points,
    full_census,
    lefschetz_fiber_prediction,
    multi_prime_consistency,
    perverse_rank_table,
)

__version__ = "0.1.0"

__all__ = [
    "BaseRing",
    "ConfigError",
    "CoverDescriptor",
    "DecompositionResult",
    "DomainError",
    "PreconditionError",
    "QuadBundleError",
    "QuadraticFamily",
    "QuadraticFormFiber",
    "RunConfig",
    "Stratification",
    "StratificationGapError",
    "UnsupportedCharacteristicError",
    "assemble_decomposition",
    "betti_table",
    "build_stratification",
    "clifford_cover",
    "corank",
    "corank_census",
    "count_quadric_points",
    "descend",
    "full_census",
    "lefschetz_fiber_prediction",
    "load_config",
    "multi_prime_consistency",
    "parse_config",
    "perverse_rank_table",
    "regularity_check",
    "signed_discriminant",
    "smooth_over_Z_check",
    "smooth_quadric_motive",
    "stratum_motive",
]
