"""Sparse multivariate polynomials in the parameters l0..lr.

Coefficients may be any exact scalar supporting ``+``, ``*`` and truth
testing (``Fraction``, :class:`FFElement`, :class:`QuadInt`).  Zero
coefficients are never stored.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from itertools import product

from ..errors import DomainError
from .quadring import QuadInt


class MultiPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise DomainError(f"exact: exponent vector {exps} does not have {nvars} entries")
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int, one=1) -> "MultiPoly":
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): one})

    @classmethod
    def linear(cls, coeffs) -> "MultiPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            exps = [0] * n
            exps[i] = 1
            terms[tuple(exps)] = c
        return cls(n, terms)

    def _check(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise DomainError("exact: polynomials in different numbers of variables")
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                terms[e] = terms[e] + c if e in terms else c
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("exact: polynomial powers must be non-negative integers")
        one = next(iter(self.terms.values()), 1)
        one = one ** 0 if not isinstance(one, QuadInt) else QuadInt(1, 0, one.d)
        out = MultiPoly.constant(self.nvars, one)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self == MultiPoly.constant(self.nvars, other)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def linear_coefficients(self) -> list:
        """Coefficient vector of a homogeneous linear form (zero form allowed)."""
        if self.terms and (self.degree() != 1 or not self.is_homogeneous()):
            raise DomainError(f"exact: {self} is not a homogeneous linear form")
        out = [0] * self.nvars
        for e, c in self.terms.items():
            out[e.index(1)] = c
        return out

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def evaluate(self, point, coerce=None):
        """Evaluate at ``point``; ``coerce`` maps coefficients into the point's ring first."""
        if len(point) != self.nvars:
            raise DomainError(f"exact: point has {len(point)} coordinates, expected {self.nvars}")
        total = None
        for e, c in self.terms.items():
            term = coerce(c) if coerce is not None else c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = term if total is None else total + term
        if total is None:
            z = point[0] * 0 if point else 0
            return z
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"l{i}" if k == 1 else f"l{i}^{k}" for i, k in enumerate(e) if k
            )
            cs = str(c)
            if not mono:
                parts.append(f"({cs})" if " " in cs or "+" in cs[1:] or "-" in cs[1:] else cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                wrap = "+" in cs[1:] or "-" in cs[1:] or "*" in cs
                parts.append(f"({cs})*{mono}" if wrap else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


_VAR = re.compile(r"l(\d+)$")


def parse_poly(text: str, nvars: int, d: int | None = None) -> MultiPoly:
    """Parse an expression over integers/rationals in l0..l(nvars-1).

    Operators ``+ - * ^`` are allowed; ``/`` only between integer literals
    (rational constants).  When ``d`` is given the symbol ``s`` denotes
    sqrt(d) and coefficients live in Z[sqrt d].
    """
    src = text.strip().replace("^", "**")
    if not src:
        raise DomainError("exact: empty polynomial")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"exact: cannot parse polynomial {text!r}: {exc.msg}") from None

    def const(c):
        if d is not None:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise DomainError(f"exact: non-integral coefficient {c} in Z[sqrt({d})]")
                c = c.numerator
            return MultiPoly.constant(nvars, QuadInt(c, 0, d))
        return MultiPoly.constant(nvars, Fraction(c))

    def rational_literal(node):
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            inner = rational_literal(node.operand)
            return None if inner is None else -inner
        return None

    def walk(node) -> MultiPoly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return const(node.value)
        if isinstance(node, ast.Name):
            m = _VAR.match(node.id)
            if m:
                i = int(m.group(1))
                if i >= nvars:
                    raise DomainError(f"exact: variable {node.id} out of range (l0..l{nvars - 1})")
                one = QuadInt(1, 0, d) if d is not None else Fraction(1)
                return MultiPoly.variable(nvars, i, one)
            if node.id == "s" and d is not None:
                return MultiPoly.constant(nvars, QuadInt(0, 1, d))
            raise DomainError(f"exact: unknown symbol {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Div):
                a, b = rational_literal(node.left), rational_literal(node.right)
                if a is None or b is None or b == 0:
                    raise DomainError(f"exact: division is only allowed between integer literals in {text!r}")
                return const(a / b)
            if isinstance(node.op, ast.Pow):
                k = node.right
                if not (isinstance(k, ast.Constant) and type(k.value) is int and k.value >= 0):
                    raise DomainError(f"exact: exponent must be a non-negative integer in {text!r}")
                return walk(node.left) ** k.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise DomainError(f"exact: unsupported syntax in polynomial {text!r}")

    return walk(tree)


def monomials(nvars: int, degree: int):
    """All exponent vectors of total degree exactly ``degree``."""
    for e in product(range(degree + 1), repeat=nvars):
        if sum(e) == degree:
            yield e


def _one_like(c):
    if isinstance(c, QuadInt):
        return QuadInt(1, 0, c.d)
    return c**0


def derivative(f: MultiPoly, i: int) -> MultiPoly:
    terms = {}
    for e, c in f.terms.items():
        k = e[i]
        if k:
            e2 = list(e)
            e2[i] -= 1
            terms[tuple(e2)] = c * k
    return MultiPoly(f.nvars, terms)


def substitute(f: MultiPoly, images) -> MultiPoly:
    """Compose f with polynomials: l_i -> images[i] (all in a common variable count)."""
    images = list(images)
    if len(images) != f.nvars:
        raise DomainError(f"exact: expected {f.nvars} substitutions, got {len(images)}")
    if not images:
        return f
    nv = images[0].nvars
    out = MultiPoly(nv)
    for e, c in f.terms.items():
        term = MultiPoly.constant(nv, c)
        for g, k in zip(images, e):
            if k:
                term = term * g**k
        out = out + term
    return out


def _coeff_sqrt(c):
    """Square root of a coefficient in its own ring, or None."""
    from .fields import FFElement

    if isinstance(c, FFElement):
        return c.sqrt() if c.is_square() else None
    if isinstance(c, QuadInt):
        return None
    c = Fraction(c)
    if c < 0:
        return None
    from math import isqrt

    n, d = c.numerator, c.denominator
    rn, rd = isqrt(n), isqrt(d)
    return Fraction(rn, rd) if rn * rn == n and rd * rd == d else None


def poly_sqrt(f: MultiPoly) -> MultiPoly | None:
    """A polynomial h with h*h == f, or None if f is not a square.

    Lex-leading-term recursion, the multivariate analogue of the schoolbook
    square root.  Coefficients must lie in Q or a finite field.
    """
    if f.is_zero():
        return f
    lead = max(f.terms)
    if any(k % 2 for k in lead):
        return None
    c0 = _coeff_sqrt(f.terms[lead])
    if c0 is None:
        return None
    h_lead = tuple(k // 2 for k in lead)
    h = MultiPoly(f.nvars, {h_lead: c0})
    two_c0 = c0 + c0
    # every further term of h is lex-smaller than h_lead and has degree <= deg(h_lead) bound
    budget = sum(1 for _ in _monomials_upto(f.nvars, f.degree() // 2)) + 1
    for _ in range(budget):
        rem = f - h * h
        if rem.is_zero():
            return h
        e = max(rem.terms)
        t = tuple(a - b for a, b in zip(e, h_lead))
        if any(k < 0 for k in t) or t >= h_lead:
            return None
        h = h + MultiPoly(f.nvars, {t: rem.terms[e] / two_c0})
    return None


def _monomials_upto(nvars: int, degree: int):
    for dgr in range(degree + 1):
        yield from monomials(nvars, dgr)


def poly_det(m) -> MultiPoly | object:
    """Determinant of a square matrix of polynomials, by expansion over column subsets."""
    n = len(m)
    if n == 0:
        return 1
    # level k: map (frozenset of used columns) -> minor of the first k rows
    level = {0: None}
    for row in range(n):
        nxt = {}
        for mask, acc in level.items():
            for col in range(n):
                if mask >> col & 1:
                    continue
                # inversions: earlier rows placed in larger columns
                sign = -1 if bin(mask >> (col + 1)).count("1") % 2 else 1
                entry = m[row][col]
                if not entry:
                    continue
                term = entry if acc is None else acc * entry
                term = term if sign == 1 else -term
                key = mask | (1 << col)
                nxt[key] = nxt[key] + term if key in nxt else term
        level = nxt
        if not level:
            return m[0][0] * 0
    (val,) = level.values()
    return val
