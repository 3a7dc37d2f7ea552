"""Finite groups as permutation groups, with subgroup and coset enumeration."""

from __future__ import annotations

from collections import deque
from functools import cached_property

from ..errors import DomainError, PreconditionError

MAX_ORDER = 10_000


def compose(g: tuple, h: tuple) -> tuple:
    """(g h)(x) = g(h(x))."""
    return tuple(g[i] for i in h)


def invert(g: tuple) -> tuple:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


class FiniteGroupData:
    """Permutation group on {0..degree-1} given by generators.

    Elements are enumerated by breadth-first closure; each element keeps a
    word in the generators so representations given on generators can be
    evaluated anywhere.
    """

    def __init__(self, name: str, generators, order: int | None = None, table=None):
        gens = [tuple(g) for g in generators]
        if not gens:
            raise DomainError("motives: a group needs at least one generator (use the identity)")
        degree = len(gens[0])
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise DomainError(f"motives: {g} is not a permutation of {degree} points")
        self.name = name
        self.degree = degree
        self.generators = tuple(gens)
        ident = tuple(range(degree))
        elements = [ident]
        words = {ident: ()}
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for k, s in enumerate(gens):
                h = compose(g, s)
                if h not in words:
                    if len(elements) >= MAX_ORDER:
                        raise PreconditionError(f"motives: group {name} exceeds order {MAX_ORDER}")
                    words[h] = words[g] + (k,)
                    elements.append(h)
                    queue.append(h)
        if order is not None and len(elements) != order:
            raise PreconditionError(f"motives: generators of {name} give order {len(elements)}, declared {order}")
        self.elements = tuple(elements)
        self.index = {g: i for i, g in enumerate(elements)}
        self.words = tuple(words[g] for g in elements)
        self._table = table

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return self.index[compose(self.elements[a], self.elements[b])]

    def inv(self, a: int) -> int:
        return self.index[invert(self.elements[a])]

    @cached_property
    def mult_table(self) -> tuple:
        return tuple(tuple(self.mul(a, b) for b in range(self.order)) for a in range(self.order))

    @cached_property
    def inverse_table(self) -> tuple:
        return tuple(self.inv(a) for a in range(self.order))

    def generated(self, elems) -> frozenset:
        """Subgroup generated by element indices."""
        out = {0}
        frontier = list(out)
        gens = list(elems)
        while frontier:
            nxt = []
            for a in frontier:
                for s in gens:
                    b = self.mult_table[a][s]
                    if b not in out:
                        out.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(out)

    @cached_property
    def subgroups(self) -> tuple:
        """All subgroups, as joins of cyclic subgroups, sorted by (order, members)."""
        cyclic = {self.generated([a]) for a in range(self.order)}
        subs = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for H in frontier:
                for C in cyclic:
                    if not C <= H:
                        J = self.generated(H | C)
                        if J not in subs:
                            new.add(J)
            subs |= new
            frontier = new
        return tuple(sorted(subs, key=lambda H: (len(H), sorted(H))))

    def conjugate(self, H: frozenset, g: int) -> frozenset:
        gi = self.inverse_table[g]
        return frozenset(self.mult_table[self.mult_table[g][h]][gi] for h in H)

    @cached_property
    def subgroup_classes(self) -> tuple:
        """One representative per conjugacy class of subgroups."""
        reps = []
        seen = set()
        for H in self.subgroups:
            if H in seen:
                continue
            reps.append(H)
            for g in range(self.order):
                seen.add(self.conjugate(H, g))
        return tuple(reps)

    def left_cosets(self, H: frozenset) -> list[frozenset]:
        cosets = []
        seen = set()
        for g in range(self.order):
            if g in seen:
                continue
            c = frozenset(self.mult_table[g][h] for h in H)
            seen |= c
            cosets.append(c)
        return cosets

    def coset_action(self, H: frozenset) -> list[tuple]:
        """Generator permutations of the left action on G/H."""
        cosets = self.left_cosets(H)
        where = {}
        for k, c in enumerate(cosets):
            for g in c:
                where[g] = k
        perms = []
        for s in self.generators:
            si = self.index[s]
            perms.append(tuple(where[self.mult_table[si][min(c)]] for c in cosets))
        return perms

    @property
    def table(self):
        """Rational irreducible representations (list of ArtinRep) or None if untabled."""
        if self._table is None:
            return None
        if callable(self._table):
            self._table = self._table(self)
        return self._table

    @property
    def tabled(self) -> bool:
        return self._table is not None

    def __repr__(self):
        return f"FiniteGroupData({self.name}, order={self.order})"


def _cycle(n: int) -> tuple:
    return tuple((i + 1) % n for i in range(n))


def trivial_group() -> FiniteGroupData:
    return _builtin("1")


def cyclic(n: int) -> FiniteGroupData:
    return FiniteGroupData(f"Z/{n}", [_cycle(n)], n)


_BUILTIN_SPECS = {
    "1": ([(0,)], 1),
    "Z/2": ([(1, 0)], 2),
    "Z/3": ([(1, 2, 0)], 3),
    "Z/4": ([(1, 2, 3, 0)], 4),
    "Z/2xZ/2": ([(1, 0, 3, 2), (2, 3, 0, 1)], 4),
    "S3": ([(1, 0, 2), (1, 2, 0)], 6),
    "D4": ([(1, 2, 3, 0), (3, 2, 1, 0)], 8),
    "A4": ([(1, 2, 0, 3), (1, 0, 3, 2)], 12),
    "S4": ([(1, 0, 2, 3), (1, 2, 3, 0)], 24),
}

_CACHE: dict[str, FiniteGroupData] = {}


def _builtin(name: str) -> FiniteGroupData:
    if name not in _CACHE:
        if name not in _BUILTIN_SPECS:
            raise DomainError(f"motives: no built-in group {name!r}")
        from .reps import builtin_table

        gens, order = _BUILTIN_SPECS[name]
        tab = builtin_table(name)
        _CACHE[name] = FiniteGroupData(name, gens, order, table=tab)
    return _CACHE[name]


def builtin_group(name: str) -> FiniteGroupData:
    return _builtin(name)


def builtin_groups() -> list[FiniteGroupData]:
    return [_builtin(n) for n in _BUILTIN_SPECS]
