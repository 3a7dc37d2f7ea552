"""Splitting idempotents of weight-zero Artin-Tate motives over one stratum.

An endomorphism of sum_k rho_!(V_k)(-n_k)[-2n_k] is a block matrix.  Blocks
between atoms of equal twist are rational intertwiners.  A block from twist
n_j to a strictly larger twist n_i is a Chow class of positive codimension on
a cover: it is carried as the opaque marker :data:`LOWER`.  Blocks towards a
smaller twist vanish.  The splitting only ever looks at the equal-twist
diagonal blocks, level by level, starting from the lowest twist.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import PreconditionError
from ..exact import column_space_basis, identity, inverse, matmul, transpose
from .atoms import ArtinTateMotive, ATAtom, weight_zero_decompose
from .reps import ArtinRep

LOWER = "lower"


def _zero(r: int, c: int):
    return [[Fraction(0)] * c for _ in range(r)]


def _is_zero(m) -> bool:
    return all(not x for row in m for x in row)


def _sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _eq(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def _block_diag(mats):
    n = sum(len(m) for m in mats)
    out = _zero(n, n)
    o = 0
    for m in mats:
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                out[o + i][o + j] = Fraction(x)
        o += len(m)
    return out


class ATEndomorphism:
    """Block endomorphism of a single-stratum Artin-Tate motive.

    ``blocks[(i, j)]`` maps atom j to atom i (indices into ``motive.atoms``).
    Missing blocks are zero, or :data:`LOWER` where twist(i) > twist(j) is
    not specified.
    """

    def __init__(self, motive: ArtinTateMotive, blocks: dict):
        atoms = motive.atoms
        if len({a.stratum for a in atoms}) > 1:
            raise PreconditionError("motives: an ATEndomorphism lives on a single stratum")
        self.motive = motive
        self.blocks = {}
        for i, ai in enumerate(atoms):
            for j, aj in enumerate(atoms):
                b = blocks.get((i, j))
                if ai.twist < aj.twist:
                    if b is not None and b != LOWER and not _is_zero(b):
                        raise PreconditionError(
                            f"motives: block ({i}, {j}) maps twist {aj.twist} to twist {ai.twist}; such Homs vanish"
                        )
                    if b == LOWER:
                        raise PreconditionError(f"motives: block ({i}, {j}) cannot carry a lower-direction class")
                    continue
                if ai.twist > aj.twist:
                    self.blocks[(i, j)] = LOWER
                    continue
                m = _zero(ai.degree, aj.degree) if b is None else [[Fraction(x) for x in row] for row in b]
                if len(m) != ai.degree or any(len(row) != aj.degree for row in m):
                    raise PreconditionError(f"motives: block ({i}, {j}) has the wrong shape")
                if ai.rep.group is not aj.rep.group:
                    raise PreconditionError(f"motives: atoms {i} and {j} have different groups")
                for si, sj in zip(ai.rep.generator_matrices(), aj.rep.generator_matrices()):
                    if not _eq(matmul(m, sj), matmul(si, m)):
                        raise PreconditionError(f"motives: block ({i}, {j}) is not an intertwiner")
                self.blocks[(i, j)] = m

    @property
    def twists(self) -> list[int]:
        return sorted({a.twist for a in self.motive.atoms})

    def level(self, twist: int) -> list[int]:
        return [k for k, a in enumerate(self.motive.atoms) if a.twist == twist]

    def level_matrix(self, twist: int):
        idx = self.level(twist)
        rows = []
        for i in idx:
            for r in range(self.motive.atoms[i].degree):
                row = []
                for j in idx:
                    row.extend(self.blocks[(i, j)][r])
                rows.append(row)
        return rows

    def level_rep(self, twist: int) -> ArtinRep:
        atoms = [self.motive.atoms[k] for k in self.level(twist)]
        G = atoms[0].rep.group
        per_gen = zip(*(a.rep.generator_matrices() for a in atoms))
        return ArtinRep.from_matrices(G, [_block_diag(ms) for ms in per_gen])


@dataclass(frozen=True)
class LevelWitness:
    """Inclusions/projections at one twist: p_I i_I = 1, p_K i_K = 1, i_K p_K + i_I p_I = 1."""

    twist: int
    level_matrix: list
    iota_image: list
    proj_image: list
    iota_kernel: list
    proj_kernel: list


@dataclass(frozen=True)
class SplitResult:
    kernel: ArtinTateMotive
    image: ArtinTateMotive
    witnesses: tuple

    def __iter__(self):
        return iter((self.kernel, self.image, self.witnesses))


def _split_projector(E):
    """Column basis i of im(E) and p with i p = E, p i = 1."""
    cols = column_space_basis(E)
    if not cols:
        return [], []
    iota = transpose(cols)
    left = matmul(inverse(matmul(transpose(iota), iota)), transpose(iota))
    return iota, matmul(left, E)


def split_idempotent(e: ATEndomorphism) -> SplitResult:
    """Kernel and image of an idempotent, by induction on the number of twist levels.

    The lowest level's diagonal block is an idempotent intertwiner; it splits
    in the semisimple category of representations.  The remaining levels are
    handled recursively.  Lower-direction blocks never enter.
    """
    atoms = e.motive.atoms
    if not atoms:
        return SplitResult(ArtinTateMotive(), ArtinTateMotive(), ())
    stratum = atoms[0].stratum

    def split(levels):
        if not levels:
            return [], [], []
        t = levels[0]
        E = e.level_matrix(t)
        if not _eq(matmul(E, E), E):
            first = e.level(t)[0]
            raise PreconditionError(f"motives: diagonal block at index {first} (twist {t}) is not idempotent")
        n = len(E)
        one = identity(n)
        rep = e.level_rep(t)
        iota_i, p_i = _split_projector(E)
        iota_k, p_k = _split_projector(_sub(one, E))
        ker, img = [], []
        if iota_i:
            img.append(ATAtom(stratum, rep.subrep(iota_i, p_i), t))
        if iota_k:
            ker.append(ATAtom(stratum, rep.subrep(iota_k, p_k), t))
        w = LevelWitness(t, E, iota_i, p_i, iota_k, p_k)
        k2, i2, w2 = split(levels[1:])
        return ker + k2, img + i2, [w] + w2

    ker, img, wit = split(e.twists)
    return SplitResult(
        weight_zero_decompose(ArtinTateMotive(ker)), weight_zero_decompose(ArtinTateMotive(img)), tuple(wit)
    )


def check_witness(w: LevelWitness) -> bool:
    """Exact identities behind a level split."""
    n = len(w.level_matrix)
    one = identity(n)
    parts = []
    for iota, p in ((w.iota_image, w.proj_image), (w.iota_kernel, w.proj_kernel)):
        if not iota:
            parts.append(_zero(n, n))
            continue
        k = len(p)
        if not _eq(matmul(p, iota), identity(k)):
            return False
        parts.append(matmul(iota, p))
    if not _eq(parts[0], w.level_matrix):
        return False
    total = [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(*parts)]
    return _eq(total, one)

