"""Prime and prime-power finite fields.

Elements of F_q, q = p^r, are encoded as integers in ``range(q)``: the base-p
digits of the code are the coordinates in the basis 1, x, ..., x^(r-1) of
F_p[x]/(f) with f the Conway polynomial for (p, r).  The same encoding is
used by the numeric kernels, so the exp/log/Zech tables built here are shared
with :mod:`quadbundle.kernels`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import DomainError

# Conway polynomials, coefficients listed from the constant term upwards.
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (11, 4): (2, 10, 8, 0, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
    (13, 4): (2, 12, 3, 0, 1),
}

MAX_TABLE_ORDER = 200_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^r; raise DomainError when q is not a prime power."""
    if q < 2:
        raise DomainError(f"exact: {q} is not a prime power")
    for p in prime_factors(q)[:1]:
        r = 0
        m = q
        while m % p == 0:
            m //= p
            r += 1
        if m == 1:
            return p, r
    raise DomainError(f"exact: {q} is not a prime power")


class FiniteField:
    """The field F_{p^r}.  Obtain instances through :func:`GF` (cached)."""

    def __init__(self, p: int, r: int = 1):
        if not is_prime(p):
            raise DomainError(f"exact: characteristic {p} is not prime")
        if r < 1:
            raise DomainError(f"exact: extension degree must be >= 1, got {r}")
        if r > 1 and (p, r) not in CONWAY:
            raise DomainError(
                f"exact: no built-in Conway polynomial for F_{p}^{r} (need p <= 13, r <= 4)"
            )
        self.p = p
        self.r = r
        self.q = p**r
        if self.q > MAX_TABLE_ORDER:
            raise DomainError(f"exact: field order {self.q} exceeds table budget")
        self.modulus = CONWAY.get((p, r), (0, 1))
        self._build_tables()

    # -- digit-level helpers -------------------------------------------------
    def _digits(self, v: int) -> list[int]:
        out = []
        for _ in range(self.r):
            v, d = divmod(v, self.p)
            out.append(d)
        return out

    def _undigits(self, ds) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def _poly_mul(self, a: int, b: int) -> int:
        p, r = self.p, self.r
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[k]
            if c:
                for i in range(r + 1):
                    prod[k - r + i] = (prod[k - r + i] - c * mod[i]) % p
        return self._undigits(prod[:r])

    def add_codes(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        return self._undigits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _find_generator(self) -> int:
        n = self.q - 1
        factors = prime_factors(n) if n > 1 else []
        for g in range(1, self.q) if self.r == 1 else [self.p] + list(range(1, self.q)):
            if g == 0:
                continue
            if all(self._pow_codes(g, n // f) != 1 for f in factors):
                return g
        raise DomainError("exact: no primitive element found")  # pragma: no cover

    def _pow_codes(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            e >>= 1
        return result

    def _build_tables(self):
        q = self.q
        self.generator = self._find_generator()
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = 1
        for k in range(q - 1):
            exp[k] = cur
            log[cur] = k
            cur = self._poly_mul(cur, self.generator)
        exp[q - 1 :] = exp[: q - 1]
        zech = np.full(q - 1, -1, dtype=np.int64)
        for k in range(q - 1):
            s = self.add_codes(1, int(exp[k]))
            zech[k] = log[s]
        neg = np.array([self._neg_code(v) for v in range(q)], dtype=np.int64)
        self.exp, self.log, self.zech, self.neg = exp, log, zech, neg
        self._exp = exp.tolist()
        self._log = log.tolist()
        self._zech = zech.tolist()
        self._negl = neg.tolist()

    def _neg_code(self, v: int) -> int:
        return self._undigits([(-d) % self.p for d in self._digits(v)])

    # -- code arithmetic (used by FFElement) --------------------------------
    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self._exp[(la + z) % (self.q - 1)]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.r == 1:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("exact: division by zero in F_%d" % self.q)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def negate(self, a: int) -> int:
        return self._negl[a]

    # -- element construction -------------------------------------------------
    def __call__(self, value) -> "FFElement":
        if isinstance(value, FFElement):
            if value.field is not self:
                if value.field.p == self.p and value.field.r == 1:
                    return FFElement(self, value.v)
                raise DomainError(f"exact: cannot coerce element of F_{value.field.q} into F_{self.q}")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return FFElement(self, value % self.p)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DomainError(f"exact: {value} has denominator divisible by {self.p}")
            return FFElement(self, value.numerator % self.p) / FFElement(
                self, value.denominator % self.p
            )
        raise DomainError(f"exact: cannot coerce {value!r} into F_{self.q}")

    def from_code(self, v: int) -> "FFElement":
        if not 0 <= v < self.q:
            raise DomainError(f"exact: code {v} out of range for F_{self.q}")
        return FFElement(self, int(v))

    @property
    def zero(self) -> "FFElement":
        return FFElement(self, 0)

    @property
    def one(self) -> "FFElement":
        return FFElement(self, 1)

    @property
    def characteristic(self) -> int:
        return self.p

    def elements(self):
        for v in range(self.q):
            yield FFElement(self, v)

    def primitive_element(self) -> "FFElement":
        """Generator of F_q^* behind the log tables (x itself when r > 1)."""
        return FFElement(self, self.generator)

    def __repr__(self):
        return f"GF({self.p}, {self.r})" if self.r > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (GF, (self.p, self.r))


@lru_cache(maxsize=None)
def GF(p: int, r: int = 1) -> FiniteField:
    return FiniteField(p, r)


def GF_order(q: int) -> FiniteField:
    p, r = prime_power(q)
    return GF(p, r)


class FFElement:
    __slots__ = ("field", "v")

    def __init__(self, field: FiniteField, v: int):
        self.field = field
        self.v = v

    def _coerce(self, other):
        if isinstance(other, FFElement):
            if other.field is self.field:
                return other.v
            return self.field(other).v
        if isinstance(other, (int, Fraction)):
            return self.field(other).v
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field.add(self.v, o))

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, self.field.negate(self.v))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field.add(self.v, self.field.negate(o)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field.add(o, self.field.negate(self.v)))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field.mul(self.v, self.field.inv(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field.mul(o, self.field.inv(self.v)))

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        f = self.field
        if self.v == 0:
            if e < 0:
                raise ZeroDivisionError("exact: zero to a negative power")
            return FFElement(f, 1 if e == 0 else 0)
        return FFElement(f, f._exp[(f._log[self.v] * e) % (f.q - 1)])

    def inverse(self) -> "FFElement":
        return FFElement(self.field, self.field.inv(self.v))

    def __eq__(self, other):
        if isinstance(other, FFElement):
            return self.field is other.field and self.v == other.v
        if isinstance(other, (int, Fraction)):
            try:
                return self.v == self.field(other).v
            except DomainError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.v))

    def __bool__(self):
        return self.v != 0

    def is_square(self) -> bool:
        """Euler criterion x^((q-1)/2) = 1; zero is rejected by the caller."""
        f = self.field
        if f.p == 2:
            return True
        return (self ** ((f.q - 1) // 2)).v == 1

    def sqrt(self) -> "FFElement":
        f = self.field
        if self.v == 0:
            return self
        lg = f._log[self.v]
        if f.p == 2:
            return FFElement(f, f._exp[(lg * (f.q // 2)) % (f.q - 1)])
        if lg % 2:
            raise DomainError(f"exact: {self!r} is not a square")
        return FFElement(f, f._exp[lg // 2])

    def __repr__(self):
        if self.field.r == 1:
            return f"{self.v}%{self.field.p}"
        return f"F{self.field.q}[{self.v}]"

    def __int__(self):
        if self.field.r != 1:
            raise DomainError("exact: only prime-field elements convert to int")
        return self.v
