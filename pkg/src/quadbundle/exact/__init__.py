"""Exact arithmetic kernel: Q, F_{p^r}, Z[sqrt d], sparse polynomials, linear algebra."""

from fractions import Fraction

from .fields import GF, GF_order, CONWAY, FFElement, FiniteField, is_prime, prime_power
from .linalg import (
    column_space_basis,
    congruence,
    det,
    identity,
    inverse,
    is_symmetric,
    kernel_basis,
    matmul,
    matvec,
    rank_over_field,
    rref,
    transpose,
)
from .poly import MultiPoly, derivative, monomials, parse_poly, poly_det, poly_sqrt, substitute
from .quadring import QuadInt, QuadResidueMap, is_squarefree, quadratic_field_is_square, residue_field_for
from .scalars import square_class

__all__ = [
    "CONWAY",
    "FFElement",
    "FiniteField",
    "Fraction",
    "GF",
    "GF_order",
    "MultiPoly",
    "QuadInt",
    "QuadResidueMap",
    "column_space_basis",
    "congruence",
    "derivative",
    "det",
    "identity",
    "inverse",
    "is_prime",
    "is_squarefree",
    "is_symmetric",
    "kernel_basis",
    "matmul",
    "matvec",
    "monomials",
    "parse_poly",
    "poly_det",
    "poly_sqrt",
    "prime_power",
    "quadratic_field_is_square",
    "rank_over_field",
    "residue_field_for",
    "rref",
    "square_class",
    "substitute",
    "transpose",
]
