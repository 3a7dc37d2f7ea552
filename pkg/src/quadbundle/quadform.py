"""Single-fiber quadratic forms given by Gram matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PreconditionError, UnsupportedCharacteristicError
from .exact import QuadInt, det, is_symmetric, kernel_basis, rank_over_field, square_class
from .exact.linalg import _as_field_matrix, congruence, rref


@dataclass(frozen=True)
class QuadraticFormFiber:
    """Quadratic form x^T G x in n variables; its zero set lives in P^(n-1)."""

    gram: tuple

    def __post_init__(self):
        rows, field = _as_field_matrix(self.gram)
        if not is_symmetric(rows):
            raise PreconditionError("quadform: Gram matrix is not symmetric")
        if field is not None and field.p == 2:
            raise UnsupportedCharacteristicError("quadform: characteristic 2 is excluded")
        object.__setattr__(self, "gram", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "_field", field)

    @classmethod
    def diagonal(cls, entries) -> "QuadraticFormFiber":
        entries = list(entries)
        zero = entries[0] * 0 if entries else 0
        return cls([[e if i == j else zero for j, _ in enumerate(entries)] for i, e in enumerate(entries)])

    @property
    def n(self) -> int:
        return len(self.gram)

    @property
    def ambient_dim(self) -> int:
        return self.n - 1

    @property
    def field(self):
        """The finite field of the entries, or None for Q."""
        return self._field

    def rows(self):
        return [list(r) for r in self.gram]

    def value(self, x):
        """Q(x) = x^T G x."""
        acc = self.gram[0][0] * 0
        for i, row in enumerate(self.gram):
            for j, g in enumerate(row):
                acc = acc + g * x[i] * x[j]
        return acc


@dataclass(frozen=True)
class DescendedForm:
    """Nondegenerate form induced on V / Rad(Q).

    ``witness`` lists vectors of V whose images form the quotient basis in which
    ``form`` is written; ``radical`` is a basis of Rad(Q).
    """

    form: QuadraticFormFiber
    witness: tuple
    radical: tuple


def corank(f: QuadraticFormFiber) -> int:
    return f.n - rank_over_field(f.rows())


def descend(f: QuadraticFormFiber) -> DescendedForm:
    rad = kernel_basis(f.rows())
    n = f.n
    if not rad:
        one = f.gram[0][0] * 0 + 1 if n else Fraction(1)
        basis = [[one if i == j else one * 0 for i in range(n)] for j in range(n)]
        return DescendedForm(f, tuple(tuple(v) for v in basis), ())
    zero = rad[0][0] * 0
    one = zero + 1
    # complete the radical basis with standard vectors; pivots of [rad | I] pick them
    cols = [list(v) for v in rad] + [[one if i == j else zero for i in range(n)] for j in range(n)]
    mat = [[c[i] for c in cols] for i in range(n)]
    _, pivots = rref(mat)
    witness = [cols[j] for j in pivots if j >= len(rad)]
    w_mat = [[w[i] for w in witness] for i in range(n)]
    g = congruence(f.rows(), w_mat) if witness else []
    return DescendedForm(QuadraticFormFiber(g), tuple(map(tuple, witness)), tuple(map(tuple, rad)))


@dataclass(frozen=True)
class SignedDiscriminant:
    value: object
    is_square: bool
    even_dimension: bool

    @property
    def split(self) -> bool:
        """Whether the Clifford-centre double cover is split (even n only)."""
        if not self.even_dimension:
            raise PreconditionError("quadform: split/non-split is only defined for an even number of variables")
        return self.is_square


def signed_discriminant(f: QuadraticFormFiber) -> SignedDiscriminant:
    """delta = (-1)^(m+1) det G for n = 2m + 2 variables.

    The double cover attached to the centre of the Clifford algebra is split
    iff delta is a square.  Odd n has no such cover; the value returned then is
    (-1)^(n(n-1)/2) det G with ``even_dimension=False``.
    """
    if corank(f) != 0:
        raise PreconditionError("quadform: signed discriminant needs a nondegenerate form")
    n = f.n
    d = det(f.rows())
    if n % 2 == 0:
        m = (n - 2) // 2
        sign = -1 if (m + 1) % 2 else 1
    else:
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
    delta = d if sign == 1 else -d
    return SignedDiscriminant(delta, square_class(delta), n % 2 == 0)


def delta_sign(num_vars: int) -> int:
    """The sign (-1)^(m+1) used for a form in num_vars = 2m + 2 variables."""
    if num_vars % 2:
        raise PreconditionError("quadform: odd number of variables has no Clifford-centre cover")
    m = (num_vars - 2) // 2
    return -1 if (m + 1) % 2 else 1


@dataclass(frozen=True)
class SmoothOverZCertificate:
    smooth: bool
    det: object
    det_is_unit: bool
    diagonal_even: tuple


def smooth_over_Z_check(h) -> SmoothOverZCertificate:
    """Even diagonal and unit determinant: the quadric has good reduction everywhere."""
    rows = [list(r) for r in h]
    n = len(rows)
    if any(len(r) != n for r in rows) or not is_symmetric(rows):
        raise PreconditionError("quadform: expected a square symmetric matrix")
    for r in rows:
        for x in r:
            if not isinstance(x, (int, QuadInt)) or isinstance(x, bool):
                raise DomainError(f"quadform: entry {x!r} is not a ring integer")
    even = tuple(
        (rows[i][i].is_twice() if isinstance(rows[i][i], QuadInt) else rows[i][i] % 2 == 0) for i in range(n)
    )
    d = det(rows)
    unit = d.is_unit() if isinstance(d, QuadInt) else abs(d) == 1
    return SmoothOverZCertificate(all(even) and unit, d, unit, even)


def reduce_matrix(h, residue) -> QuadraticFormFiber:
    """Apply a residue map entrywise (e.g. Z[sqrt d] -> F_q) and wrap as a fiber."""
    return QuadraticFormFiber([[residue(x) for x in r] for r in h])
