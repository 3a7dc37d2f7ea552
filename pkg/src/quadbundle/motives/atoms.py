"""Weight-zero Artin-Tate atoms rho_!(V)(-n)[-2n] and their formal sums."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace

from ..errors import DomainError
from .groups import builtin_group
from .reps import ArtinRep, constituents


@dataclass(frozen=True, eq=False)
class ATAtom:
    """rho_!(V)(-twist)[-2 twist] on a stratum, optionally wrapped as i_* j_!*."""

    stratum: str
    rep: ArtinRep
    twist: int = 0
    ic: bool = False

    def __post_init__(self):
        if self.twist < 0:
            raise DomainError("motives: atoms use non-negative twists (-n)[-2n]")

    @property
    def shift(self) -> int:
        return -2 * self.twist

    @property
    def label(self) -> str:
        return self.rep.label or f"deg{self.rep.degree}"

    @property
    def degree(self) -> int:
        return self.rep.degree

    @property
    def key(self) -> tuple:
        return (self.stratum, self.twist, self.label)

    @property
    def resolved(self) -> bool:
        return self.rep.resolved

    def twisted(self, k: int) -> "ATAtom":
        return replace(self, twist=self.twist + k)

    def on(self, stratum: str, ic: bool | None = None) -> "ATAtom":
        return replace(self, stratum=stratum, ic=self.ic if ic is None else ic)

    def __str__(self):
        base = "1" if self.label == "triv" else self.label
        body = base if self.twist == 0 else f"{base}(-{self.twist})[-{2 * self.twist}]"
        return f"j!*[{self.stratum}]({body})" if self.ic else body

    def __repr__(self):
        return f"ATAtom({self.stratum!r}, {self.label}, twist={self.twist}, ic={self.ic})"


class ArtinTateMotive:
    """Multiset of atoms kept in canonical order (stratum, twist, label)."""

    __slots__ = ("atoms",)

    def __init__(self, atoms=()):
        self.atoms = tuple(sorted(atoms, key=lambda a: a.key))

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __add__(self, other: "ArtinTateMotive") -> "ArtinTateMotive":
        return ArtinTateMotive(self.atoms + tuple(other))

    def twisted(self, k: int) -> "ArtinTateMotive":
        """Apply (-k)[-2k] to every atom."""
        return ArtinTateMotive(a.twisted(k) for a in self.atoms)

    def on(self, stratum: str, ic: bool | None = None) -> "ArtinTateMotive":
        return ArtinTateMotive(a.on(stratum, ic) for a in self.atoms)

    def restrict(self, stratum: str) -> "ArtinTateMotive":
        return ArtinTateMotive(a for a in self.atoms if a.stratum == stratum)

    @property
    def strata(self) -> list[str]:
        return sorted({a.stratum for a in self.atoms})

    @property
    def resolved(self) -> bool:
        return all(a.resolved for a in self.atoms)

    def __eq__(self, other):
        if not isinstance(other, ArtinTateMotive):
            return NotImplemented
        return [(a.key, a.ic) for a in self.atoms] == [(b.key, b.ic) for b in other.atoms]

    def __hash__(self):
        return hash(tuple((a.key, a.ic) for a in self.atoms))

    def __str__(self):
        return " + ".join(str(a) for a in self.atoms) if self.atoms else "0"

    def __repr__(self):
        return f"ArtinTateMotive({self})"


# ---------------------------------------------------------------------------


def z2():
    return builtin_group("Z/2")


def trivial_rep() -> ArtinRep:
    return z2().table[0]


def sign_rep() -> ArtinRep:
    return z2().table[1]


def double_cover_rep(split: bool | None) -> ArtinRep:
    """Permutation representation of a degree-2 cover (None: monodromy unknown)."""
    G = z2()
    if split is None:
        return ArtinRep.gset(G, [(1, 0)], label="cover?")
    perm = (0, 1) if split else (1, 0)
    return ArtinRep.gset(G, [perm], label="cover-split" if split else "cover-nonsplit")


def tate(twist: int, stratum: str = "S") -> ATAtom:
    return ATAtom(stratum, trivial_rep(), twist)


def weight_zero_decompose(M: ArtinTateMotive) -> ArtinTateMotive:
    """Replace each atom by its rational irreducible constituents at the same twist."""
    out = []
    for a in M:
        if a.rep.label == "cover?":
            out.append(replace(a, rep=trivial_rep()))
            out.append(replace(a, rep=ArtinRep.unresolved()))
            continue
        for c in constituents(a.rep):
            out.extend(replace(a, rep=c.rep) for _ in range(c.multiplicity))
    return ArtinTateMotive(out)


def realization_multiset(M: ArtinTateMotive) -> Counter:
    """Isomorphism-invariant fingerprint: multiset of (degree, twist, character label)."""
    return Counter((a.degree, a.twist, a.label) for a in weight_zero_decompose(M))


def fairness_check(Mbar_end_dim: int, M_end_dim: int) -> bool:
    """Restriction End(Mbar) -> End(M) is injective, so equal dimensions mean fair."""
    if Mbar_end_dim < 0 or M_end_dim < 0:
        raise DomainError("motives: endomorphism dimensions are non-negative")
    return Mbar_end_dim == M_end_dim
