"""Scalar helpers shared across the exact kernel: square classes over Q, F_q, Q(sqrt d)."""

from __future__ import annotations

from fractions import Fraction

from ..errors import DomainError, UnsupportedCharacteristicError
from .fields import FFElement
from .quadring import QuadInt, _rational_is_square


def square_class(x) -> bool:
    """Return True iff the nonzero field element ``x`` is a square.

    Finite fields use the Euler criterion, rationals test numerator and
    denominator, and elements of Z[sqrt d] are tested in Q(sqrt d).
    """
    if isinstance(x, FFElement):
        if x.field.p == 2:
            raise UnsupportedCharacteristicError("exact: square classes in characteristic 2 are excluded")
        if x.v == 0:
            raise DomainError("exact: square class of zero")
        return x.is_square()
    if isinstance(x, QuadInt):
        return x.is_square_in_fraction_field()
    if isinstance(x, (int, Fraction)):
        if x == 0:
            raise DomainError("exact: square class of zero")
        return _rational_is_square(Fraction(x))
    raise DomainError(f"exact: no square class for {x!r}")


def is_field_element(x) -> bool:
    return isinstance(x, (FFElement, Fraction, int)) and not isinstance(x, bool)


def characteristic_of(x) -> int:
    if isinstance(x, FFElement):
        return x.field.p
    return 0
