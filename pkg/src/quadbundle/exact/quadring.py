"""The quadratic ring Z[sqrt(d)] for square-free d, plus residue maps to F_q."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from ..errors import DomainError
from .fields import GF, FFElement, FiniteField


def is_squarefree(d: int) -> bool:
    if d in (0, 1):
        return False
    m = abs(d)
    f = 2
    while f * f <= m:
        if m % (f * f) == 0:
            return False
        f += 1
    return True


def _rational_is_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, m = x.numerator, x.denominator
    return isqrt(n) ** 2 == n and isqrt(m) ** 2 == m


def _rational_sqrt(x: Fraction) -> Fraction:
    return Fraction(isqrt(x.numerator), isqrt(x.denominator))


class QuadInt:
    """a + b*sqrt(d) with integer a, b."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: int, b: int, d: int):
        if not is_squarefree(d):
            raise DomainError(f"exact: quadratic ring needs square-free d != 0, 1; got {d}")
        self.a = int(a)
        self.b = int(b)
        self.d = d

    def _lift(self, other):
        if isinstance(other, QuadInt):
            if other.d != self.d:
                raise DomainError(f"exact: mixing Z[sqrt({self.d})] and Z[sqrt({other.d})]")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.d)
        if isinstance(other, Fraction) and other.denominator == 1:
            return QuadInt(other.numerator, 0, self.d)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = QuadInt(1, 0, self.d)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self) -> "QuadInt":
        return QuadInt(self.a, -self.b, self.d)

    def norm(self) -> int:
        return self.a * self.a - self.d * self.b * self.b

    def exact_div(self, other) -> "QuadInt":
        """Quotient in Z[sqrt(d)]; DomainError when it does not exist."""
        o = self._lift(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("exact: division by zero in quadratic ring")
        num = self * o.conjugate()
        if num.a % n or num.b % n:
            raise DomainError(f"exact: {self} is not divisible by {o}")
        return QuadInt(num.a // n, num.b // n, self.d)

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def is_twice(self) -> bool:
        """True iff the element is 2*y for some y in the ring."""
        return self.a % 2 == 0 and self.b % 2 == 0

    def is_square_in_fraction_field(self) -> bool:
        """Decide whether a + b*sqrt(d) is a square in Q(sqrt(d))."""
        if self.a == 0 and self.b == 0:
            raise DomainError("exact: square class of zero")
        return quadratic_field_is_square(Fraction(self.a), Fraction(self.b), self.d)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, QuadInt) or other.d == self.d else None
        if o is None:
            return NotImplemented if not isinstance(other, QuadInt) else False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        if self.a == 0:
            return f"{self.b}*s"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*s"


def quadratic_field_is_square(a: Fraction, b: Fraction, d: int) -> bool:
    # (u + v s)^2 = u^2 + d v^2 + 2uv s, with norm (u^2 - d v^2)^2
    if b == 0:
        return _rational_is_square(a) or _rational_is_square(a / d)
    n2 = a * a - d * b * b
    if not _rational_is_square(n2):
        return False
    n = _rational_sqrt(n2)
    for cand in ((a + n) / 2, (a - n) / 2):
        if cand != 0 and _rational_is_square(cand):
            u = _rational_sqrt(cand)
            v = b / (2 * u)
            if u * u + d * v * v == a:
                return True
    return False


class QuadResidueMap:
    """Reduction Z[sqrt(d)] -> F_q sending sqrt(d) to a chosen root of x^2 - d."""

    def __init__(self, d: int, field: FiniteField, root: FFElement | None = None):
        if field.p == 2:
            from ..errors import UnsupportedCharacteristicError

            raise UnsupportedCharacteristicError("exact: residue maps in characteristic 2 are excluded")
        self.d = d
        self.field = field
        dd = field(d)
        if root is None:
            roots = [x for x in field.elements() if x * x == dd]
            if not roots:
                raise DomainError(f"exact: x^2 - ({d}) has no root in F_{field.q}")
            root = roots[0]
        elif root * root != dd:
            raise DomainError(f"exact: {root!r} is not a square root of {d} in F_{field.q}")
        self.root = root

    def __call__(self, x) -> FFElement:
        if isinstance(x, QuadInt):
            return self.field(x.a) + self.field(x.b) * self.root
        return self.field(x)

    def __repr__(self):
        return f"QuadResidueMap(d={self.d}, q={self.field.q}, sqrt(d)->{self.root!r})"


def residue_field_for(d: int, p: int) -> FiniteField:
    """Smallest F_{p^k} containing a square root of d (k = 1 or 2)."""
    F = GF(p)
    if any(x * x == F(d) for x in F.elements()):
        return F
    return GF(p, 2)
