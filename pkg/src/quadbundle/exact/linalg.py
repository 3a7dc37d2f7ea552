"""Exact dense linear algebra on lists of rows.

Field entries are ``Fraction`` (plain ints are promoted) or
:class:`FFElement` from a single field.  Ring determinants additionally
accept ``int`` and :class:`QuadInt` through fraction-free elimination.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DomainError
from .fields import FFElement
from .quadring import QuadInt


def _as_field_matrix(m):
    rows = [list(r) for r in m]
    if not rows:
        return rows, None
    ncols = len(rows[0])
    field = None
    for r in rows:
        if len(r) != ncols:
            raise DomainError("exact: ragged matrix")
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            if isinstance(x, FFElement):
                if field is None:
                    field = x.field
                elif x.field is not field:
                    raise DomainError("exact: matrix mixes different finite fields")
            elif isinstance(x, bool) or not isinstance(x, (int, Fraction)):
                raise DomainError(f"exact: entry {x!r} does not lie in a field")
    if field is not None:
        rows = [[field(x) for x in r] for r in rows]
    else:
        rows = [[Fraction(x) for x in r] for r in rows]
    return rows, field


def _zero_one(field):
    if field is None:
        return Fraction(0), Fraction(1)
    return field.zero, field.one


def rank_over_field(m) -> int:
    """Rank by fraction-free (Bareiss) elimination."""
    rows, _ = _as_field_matrix(m)
    if not rows:
        return 0
    nr, nc = len(rows), len(rows[0])
    k = 0
    prev = None
    for col in range(nc):
        piv = next((i for i in range(k, nr) if rows[i][col]), None)
        if piv is None:
            continue
        rows[k], rows[piv] = rows[piv], rows[k]
        pk = rows[k][col]
        for i in range(k + 1, nr):
            a = rows[i][col]
            ri = rows[i]
            for j in range(col + 1, nc):
                v = pk * ri[j] - a * rows[k][j]
                ri[j] = v / prev if prev is not None else v
            ri[col] = pk * 0
        prev = pk
        k += 1
        if k == nr:
            break
    return k


def rref(m):
    """Reduced row echelon form and the pivot column list."""
    rows, field = _as_field_matrix(m)
    if not rows:
        return rows, []
    zero, one = _zero_one(field)
    nr, nc = len(rows), len(rows[0])
    pivots = []
    k = 0
    for col in range(nc):
        piv = next((i for i in range(k, nr) if rows[i][col]), None)
        if piv is None:
            continue
        rows[k], rows[piv] = rows[piv], rows[k]
        inv = one / rows[k][col]
        rows[k] = [x * inv for x in rows[k]]
        for i in range(nr):
            if i != k and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[k])]
        pivots.append(col)
        k += 1
        if k == nr:
            break
    return rows, pivots


def kernel_basis(m) -> list[list]:
    """Basis of the right kernel {v : m v = 0}; empty iff full column rank."""
    rows, field = _as_field_matrix(m)
    if not rows:
        return []
    zero, one = _zero_one(field)
    nc = len(rows[0])
    red, pivots = rref(rows)
    free = [j for j in range(nc) if j not in pivots]
    basis = []
    for f in free:
        v = [zero] * nc
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def column_space_basis(m) -> list[list]:
    """Columns of ``m`` at the pivot positions, as a list of column vectors."""
    _, pivots = rref(m)
    return [[row[j] for row in m] for j in pivots]


def det(m):
    """Determinant over a field, or over int / Z[sqrt d] by Bareiss with exact division."""
    rows = [list(r) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DomainError("exact: determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    ring = any(isinstance(x, QuadInt) for r in rows for x in r)
    if ring:
        d = next(x.d for r in rows for x in r if isinstance(x, QuadInt))
        rows = [[x if isinstance(x, QuadInt) else QuadInt(int(x), 0, d) for x in r] for r in rows]

        def div(a, b):
            return a.exact_div(b)
    elif all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r):
        def div(a, b):
            q, rem = divmod(a, b)
            if rem:
                raise DomainError("exact: inexact division in integer Bareiss")  # pragma: no cover
            return q
    else:
        rows, _ = _as_field_matrix(rows)

        def div(a, b):
            return a / b
    sign = 1
    prev = None
    for k in range(n - 1):
        if not rows[k][k]:
            piv = next((i for i in range(k + 1, n) if rows[i][k]), None)
            if piv is None:
                return rows[0][0] * 0
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = rows[k][k] * rows[i][j] - rows[i][k] * rows[k][j]
                rows[i][j] = div(v, prev) if prev is not None else v
        prev = rows[k][k]
    out = rows[n - 1][n - 1]
    return out if sign == 1 else -out


def transpose(m):
    return [list(c) for c in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                t = x * y
                acc = t if acc is None else acc + t
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), start=row[0] * 0) for row in a]


def identity(n: int, one=Fraction(1)):
    zero = one * 0
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def is_symmetric(m) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def congruence(gram, p):
    """P^T G P."""
    return matmul(matmul(transpose(p), gram), p)


def inverse(m):
    rows, field = _as_field_matrix(m)
    n = len(rows)
    zero, one = _zero_one(field)
    aug = [r + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise DomainError("exact: matrix is singular")
    return [r[n:] for r in red]
