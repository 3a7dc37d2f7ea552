"""Formal algebra of weight-zero Artin-Tate motives."""

from .atoms import (
    ArtinTateMotive,
    ATAtom,
    double_cover_rep,
    fairness_check,
    realization_multiset,
    sign_rep,
    tate,
    trivial_rep,
    weight_zero_decompose,
)
from .groups import FiniteGroupData, builtin_group, builtin_groups, cyclic
from .idempotents import LOWER, ATEndomorphism, LevelWitness, SplitResult, check_witness, split_idempotent
from .reps import (
    ArtinRep,
    Constituent,
    PartialDecompositionError,
    constituents,
    decompose_rep,
    hom_dimension,
    inner_product,
    transitive_gsets,
)

__all__ = [
    "ATAtom",
    "ATEndomorphism",
    "ArtinRep",
    "ArtinTateMotive",
    "Constituent",
    "FiniteGroupData",
    "LOWER",
    "LevelWitness",
    "PartialDecompositionError",
    "SplitResult",
    "builtin_group",
    "builtin_groups",
    "check_witness",
    "constituents",
    "cyclic",
    "decompose_rep",
    "double_cover_rep",
    "fairness_check",
    "hom_dimension",
    "inner_product",
    "realization_multiset",
    "sign_rep",
    "split_idempotent",
    "tate",
    "transitive_gsets",
    "trivial_rep",
    "weight_zero_decompose",
]
