"""Rational Artin representations of finite groups: G-sets and matrix representations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ..errors import DomainError, PreconditionError
from ..exact import identity, matmul
from .groups import FiniteGroupData, builtin_group, compose


class PartialDecompositionError(DomainError):
    """Raised when a representation cannot be split into rational irreducibles."""

    def __init__(self, message, trivial_multiplicity=None, residual_degree=None):
        super().__init__(message)
        self.trivial_multiplicity = trivial_multiplicity
        self.residual_degree = residual_degree


def _frac_matrix(m):
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def _perm_matrix(perm) -> tuple:
    n = len(perm)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[j][i] = Fraction(1)
    return tuple(map(tuple, rows))


class ArtinRep:
    """A representation of a finite group over Q.

    Either a G-set (``perms``: one permutation of {0..k-1} per generator) or
    explicit matrices per generator.  Well-definedness is checked on
    construction: the values assigned to every element through words must be
    multiplicative.
    """

    def __init__(self, group: FiniteGroupData, *, perms=None, matrices=None, label: str | None = None,
                 resolved: bool = True, irreducible: bool | None = None):
        if (perms is None) == (matrices is None) and resolved:
            raise DomainError("motives: give exactly one of perms or matrices")
        self.group = group
        self.label = label
        self.resolved = resolved
        self._irreducible = irreducible
        if not resolved:
            self.perms = None
            self.matrices = None
            self.degree = 1
            return
        if perms is not None:
            perms = tuple(tuple(p) for p in perms)
            if len(perms) != len(group.generators):
                raise DomainError("motives: one permutation per generator expected")
            k = len(perms[0])
            if any(sorted(p) != list(range(k)) for p in perms):
                raise DomainError("motives: G-set generators must be permutations")
            self.perms = perms
            self.matrices = None
            self.degree = k
        else:
            mats = tuple(_frac_matrix(m) for m in matrices)
            if len(mats) != len(group.generators):
                raise DomainError("motives: one matrix per generator expected")
            k = len(mats[0])
            if any(len(m) != k or any(len(r) != k for r in m) for m in mats):
                raise DomainError("motives: generator matrices must be square of equal size")
            self.perms = None
            self.matrices = mats
            self.degree = k
        self._check_homomorphism()

    # -- constructors -----------------------------------------------------------
    @classmethod
    def gset(cls, group, perms, label=None) -> "ArtinRep":
        return cls(group, perms=perms, label=label)

    @classmethod
    def coset(cls, group, H: frozenset, label=None) -> "ArtinRep":
        """The transitive G-set G/H."""
        return cls(group, perms=group.coset_action(H), label=label)

    @classmethod
    def from_matrices(cls, group, matrices, label=None, irreducible=None) -> "ArtinRep":
        return cls(group, matrices=matrices, label=label, irreducible=irreducible)

    @classmethod
    def trivial(cls, group) -> "ArtinRep":
        return cls(group, matrices=[[[1]] for _ in group.generators], label="triv", irreducible=True)

    @classmethod
    def regular(cls, group) -> "ArtinRep":
        return cls.coset(group, frozenset({0}), label="regular")

    @classmethod
    def unresolved(cls, group=None) -> "ArtinRep":
        """Placeholder for a rank-one summand whose monodromy was not decided."""
        return cls(group or builtin_group("Z/2"), label="unresolved", resolved=False)

    # -- evaluation -------------------------------------------------------------
    @property
    def is_gset(self) -> bool:
        return self.perms is not None

    def element_perm(self, k: int) -> tuple:
        return self._element_perms[k]

    def element_matrix(self, k: int):
        return self._element_mats[k]

    @cached_property
    def _element_perms(self):
        if not self.is_gset:
            raise DomainError("motives: not a G-set")
        ident = tuple(range(self.degree))
        out = []
        for w in self.group.words:
            p = ident
            for s in w:
                p = compose(p, self.perms[s])
            out.append(p)
        return out

    @cached_property
    def _element_mats(self):
        gens = [_perm_matrix(p) for p in self.perms] if self.is_gset else self.matrices
        one = identity(self.degree)
        out = []
        for w in self.group.words:
            m = one
            for s in w:
                m = matmul(m, gens[s])
            out.append(tuple(map(tuple, m)))
        return out

    def generator_matrices(self):
        if self.is_gset:
            return [_perm_matrix(p) for p in self.perms]
        return list(self.matrices)

    def _check_homomorphism(self):
        G = self.group
        if self.is_gset:
            vals = self._element_perms
            for a in range(G.order):
                for k, s in enumerate(G.generators):
                    if vals[G.index[compose(G.elements[a], s)]] != compose(vals[a], self.perms[k]):
                        raise PreconditionError(f"motives: G-set action of {self.label or 'rep'} is not a homomorphism")
        else:
            vals = self._element_mats
            for a in range(G.order):
                for k, s in enumerate(G.generators):
                    lhs = vals[G.index[compose(G.elements[a], s)]]
                    rhs = tuple(map(tuple, matmul(vals[a], self.matrices[k])))
                    if lhs != rhs:
                        raise PreconditionError(
                            f"motives: matrices of {self.label or 'rep'} violate the group relations"
                        )

    @cached_property
    def character(self) -> tuple:
        if not self.resolved:
            raise DomainError("motives: unresolved representation has no character")
        if self.is_gset:
            return tuple(Fraction(sum(1 for i, x in enumerate(p) if i == x)) for p in self._element_perms)
        return tuple(sum(m[i][i] for i in range(self.degree)) for m in self._element_mats)

    def orbits(self) -> list[list[int]]:
        if not self.is_gset:
            raise DomainError("motives: orbits need a G-set")
        seen = [False] * self.degree
        out = []
        for x in range(self.degree):
            if seen[x]:
                continue
            orb = [x]
            seen[x] = True
            for y in orb:
                for p in self.perms:
                    z = p[y]
                    if not seen[z]:
                        seen[z] = True
                        orb.append(z)
            out.append(sorted(orb))
        return out

    def stabilizer(self, x: int) -> frozenset:
        return frozenset(k for k, p in enumerate(self._element_perms) if p[x] == x)

    def subrep(self, inclusion, projection, label=None) -> "ArtinRep":
        """Representation on a G-stable subspace: s -> p rho(s) i."""
        mats = [matmul(matmul(projection, m), inclusion) for m in self.generator_matrices()]
        return ArtinRep(self.group, matrices=mats, label=label)

    @property
    def is_irreducible(self) -> bool | None:
        if self._irreducible is not None:
            return self._irreducible
        if not self.resolved:
            return None
        cons = constituents(self)
        if all(c.exact for c in cons):
            return len(cons) == 1 and cons[0].multiplicity == 1
        return None

    def __repr__(self):
        return f"ArtinRep({self.group.name}, deg={self.degree}, label={self.label!r})"


def inner_product(chi, psi, group: FiniteGroupData) -> Fraction:
    inv = group.inverse_table
    return sum((chi[g] * psi[inv[g]] for g in range(group.order)), Fraction(0)) / group.order


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class Constituent:
    label: str
    multiplicity: int
    degree: int
    rep: ArtinRep | None
    exact: bool = True


def constituents(V: ArtinRep) -> list[Constituent]:
    """Irreducible constituents with multiplicities (table order).

    Over untabled groups a G-set splits into its transitive pieces, marked
    ``exact=False`` (possibly reducible); matrix representations raise
    :class:`PartialDecompositionError`.
    """
    if not V.resolved:
        return [Constituent("unresolved", 1, 1, V, exact=False)]
    G = V.group
    if V._irreducible and V.label:
        return [Constituent(V.label, 1, V.degree, V)]
    table = G.table
    if table is not None:
        out = []
        total = 0
        for W in table:
            m = inner_product(V.character, W.character, G) / inner_product(W.character, W.character, G)
            if m.denominator != 1:
                raise PreconditionError(f"motives: non-integral multiplicity {m} of {W.label}")  # pragma: no cover
            if m:
                out.append(Constituent(W.label, int(m), W.degree, W))
                total += int(m) * W.degree
        if total != V.degree:
            raise PreconditionError("motives: character table of " + G.name + " is incomplete")  # pragma: no cover
        return out
    if V.is_gset:
        counts: dict[str, list] = {}
        classes = G.subgroup_classes
        for orb in V.orbits():
            stab = V.stabilizer(orb[0])
            k = next(i for i, H in enumerate(classes) if any(G.conjugate(H, g) == stab for g in range(G.order)))
            if len(orb) == 1:
                label, exact = "triv", True
            else:
                label, exact = f"{G.name}/H{k}", False
            rep = ArtinRep.coset(G, classes[k], label=label)
            entry = counts.setdefault(label, [0, len(orb), rep, exact])
            entry[0] += 1
        return [Constituent(lbl, m, d, rep, ex) for lbl, (m, d, rep, ex) in sorted(counts.items())]
    triv = inner_product(V.character, (Fraction(1),) * G.order, G)
    if triv == V.degree:
        return [Constituent("triv", V.degree, 1, ArtinRep.trivial(G))]
    raise PartialDecompositionError(
        f"motives: no rational character table for {G.name}; trivial multiplicity {triv}, "
        f"residual degree {V.degree - int(triv)} left undecomposed",
        int(triv),
        V.degree - int(triv),
    )


def decompose_rep(V: ArtinRep) -> list[tuple[str, int]]:
    """(label, multiplicity) pairs; degrees times multiplicities sum to deg V."""
    return [(c.label, c.multiplicity) for c in constituents(V)]


def hom_dimension(A: ArtinRep, B: ArtinRep) -> int:
    """dim Hom_G(Q[A], Q[B]) = number of G-orbits on A x B (Burnside)."""
    if A.group is not B.group:
        raise DomainError("motives: G-sets over different groups")
    if not (A.is_gset and B.is_gset):
        raise DomainError("motives: hom_dimension needs both representations as G-sets")
    G = A.group
    total = 0
    for k in range(G.order):
        pa, pb = A.element_perm(k), B.element_perm(k)
        fa = sum(1 for i, x in enumerate(pa) if i == x)
        fb = sum(1 for i, x in enumerate(pb) if i == x)
        total += fa * fb
    if total % G.order:
        raise PreconditionError("motives: Burnside count is not integral")  # pragma: no cover
    return total // G.order


def transitive_gsets(group: FiniteGroupData) -> list[ArtinRep]:
    """One transitive G-set G/H per conjugacy class of subgroups."""
    return [ArtinRep.coset(group, H, label=f"{group.name}/H{k}") for k, H in enumerate(group.subgroup_classes)]


# ---------------------------------------------------------------------------
# built-in rational character tables (given by irreducible matrix models)


def _one_dim(group, values, label):
    return ArtinRep.from_matrices(group, [[[v]] for v in values], label=label, irreducible=True)


def _table_factory(name: str):
    def build(G):
        triv = ArtinRep.trivial(G)
        if name == "1":
            return [triv]
        if name == "Z/2":
            return [triv, _one_dim(G, [-1], "sign")]
        if name == "Z/3":
            return [triv, ArtinRep.from_matrices(G, [[[0, -1], [1, -1]]], label="rho2", irreducible=True)]
        if name == "Z/4":
            return [
                triv,
                _one_dim(G, [-1], "sign"),
                ArtinRep.from_matrices(G, [[[0, -1], [1, 0]]], label="rho2", irreducible=True),
            ]
        if name == "Z/2xZ/2":
            return [
                triv,
                _one_dim(G, [-1, 1], "sign_a"),
                _one_dim(G, [1, -1], "sign_b"),
                _one_dim(G, [-1, -1], "sign_ab"),
            ]
        if name == "S3":
            # generators: transposition (0 1), 3-cycle (0 1 2); std on e0-e2, e1-e2
            return [
                triv,
                _one_dim(G, [-1, 1], "sign"),
                ArtinRep.from_matrices(G, [[[0, 1], [1, 0]], [[-1, -1], [1, 0]]], label="std", irreducible=True),
            ]
        raise DomainError(f"motives: no table for {name}")  # pragma: no cover

    return build


_TABLED = {"1", "Z/2", "Z/3", "Z/4", "Z/2xZ/2", "S3"}


def builtin_table(name: str):
    return _table_factory(name) if name in _TABLED else None
