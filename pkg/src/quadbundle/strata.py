"""Parameter-space geometry of quadric families over P^r.

A family is a symmetric matrix of homogeneous polynomials in l0..lr.  This
module classifies parameter points by corank, samples the corank loci over
finite fields, detects normal-crossing discriminants of diagonal linear
systems exactly, and builds the two stratifications the engine consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .errors import DomainError, PreconditionError, UnsupportedCharacteristicError
from .exact import (
    GF,
    FFElement,
    FiniteField,
    GF_order,
    MultiPoly,
    QuadInt,
    QuadResidueMap,
    derivative,
    is_prime,
    is_squarefree,
    parse_poly,
    poly_det,
    rank_over_field,
    residue_field_for,
)
from .quadform import QuadraticFormFiber, corank

_EVAL_CHUNK = 1 << 15


# ---------------------------------------------------------------------------
# base rings


@dataclass(frozen=True)
class BaseRing:
    """Coefficient ring of a family: Q, a fixed F_{p^k}, or Z[sqrt d]."""

    kind: str
    p: int = 0
    degree: int = 1
    d: int = 0

    @classmethod
    def rational(cls) -> "BaseRing":
        return cls("rational")

    @classmethod
    def finite(cls, p: int, degree: int = 1) -> "BaseRing":
        if not is_prime(p):
            raise DomainError(f"strata: {p} is not prime")
        if p == 2:
            raise UnsupportedCharacteristicError("strata: characteristic 2 is excluded")
        GF(p, degree)
        return cls("finite", p, degree)

    @classmethod
    def quadratic(cls, d: int) -> "BaseRing":
        if d in (0, 1) or not is_squarefree(d):
            raise DomainError(f"strata: Z[sqrt({d})] needs a square-free d != 0, 1")
        return cls("quadratic", d=d)

    def __post_init__(self):
        if self.kind not in ("rational", "finite", "quadratic"):
            raise DomainError(f"strata: unknown base ring {self.kind!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "quadratic"

    def field(self) -> FiniteField:
        if self.kind != "finite":
            raise DomainError("strata: only finite base rings have a field of definition")
        return GF(self.p, self.degree)

    def scalar(self, x):
        """Coerce an integer or fraction into the base ring."""
        if self.kind == "finite":
            return self.field()(x)
        if self.kind == "quadratic":
            if isinstance(x, QuadInt):
                return x
            x = Fraction(x)
            if x.denominator != 1:
                raise DomainError(f"strata: {x} is not integral in Z[sqrt({self.d})]")
            return QuadInt(x.numerator, 0, self.d)
        return Fraction(x)

    def residue(self, q: int):
        """Residue field and coefficient map at ``q``.

        ``q`` is a prime power for Q, must equal p^k for a finite base, and is
        the rational prime below the chosen ideal for Z[sqrt d].
        """
        if self.kind == "rational":
            F = GF_order(q)
            if F.p == 2:
                raise UnsupportedCharacteristicError("strata: characteristic 2 is excluded")
            return F, F
        if self.kind == "finite":
            F = self.field()
            if q != F.q:
                raise DomainError(f"strata: family is defined over F_{F.q}, not F_{q}")
            return F, F
        if not is_prime(q):
            raise DomainError(f"strata: reduction of Z[sqrt({self.d})] needs a rational prime, got {q}")
        if q == 2:
            raise UnsupportedCharacteristicError("strata: characteristic 2 is excluded")
        F = residue_field_for(self.d, q)
        return F, QuadResidueMap(self.d, F)

    def describe(self) -> str:
        if self.kind == "rational":
            return "Q"
        if self.kind == "finite":
            return f"F_{self.p ** self.degree}"
        return f"Z[sqrt({self.d})]"


# ---------------------------------------------------------------------------
# families


def _compile_polys(polys, nvars: int, residue) -> tuple[np.ndarray, np.ndarray]:
    monos = sorted({e for f in polys for e in f.terms})
    if not monos:
        monos = [(0,) * nvars]
    index = {e: m for m, e in enumerate(monos)}
    coeffs = np.zeros((len(polys), len(monos)), dtype=np.int64)
    for k, f in enumerate(polys):
        for e, c in f.terms.items():
            try:
                coeffs[k, index[e]] = residue(c).v
            except DomainError as exc:
                raise DomainError(f"strata: family is not defined over the residue field ({exc})") from None
    return coeffs, np.array(monos, dtype=np.int64).reshape(len(monos), nvars)


def evaluate_polys_at(polys, nvars: int, residue, field: FiniteField, points: np.ndarray) -> np.ndarray:
    """Codes of each polynomial at each point (shape N x len(polys))."""
    T = kernels.tables(field)
    coeffs, exps = _compile_polys(polys, nvars, residue)
    out = [kernels.evaluate_polys(coeffs, exps, points[s : s + _EVAL_CHUNK], T) for s in range(0, len(points), _EVAL_CHUNK)]
    return np.concatenate(out, axis=0) if out else np.zeros((0, len(polys)), dtype=np.int64)


@dataclass(frozen=True)
class QuadraticFamily:
    """Symmetric matrix of polynomials in l0..lr: the section q of S^2 E^v (x) L."""

    entries: tuple
    r: int
    base: BaseRing = field(default_factory=BaseRing.rational)

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise DomainError("strata: family matrix must be square")
        nv = self.r + 1
        clean = []
        for row in rows:
            out = []
            for e in row:
                if not isinstance(e, MultiPoly):
                    e = MultiPoly.constant(nv, self.base.scalar(e))
                if e.nvars != nv:
                    raise DomainError(f"strata: entry {e} is not a polynomial in l0..l{self.r}")
                out.append(e)
            clean.append(tuple(out))
        for i in range(n):
            for j in range(i + 1, n):
                if clean[i][j] != clean[j][i]:
                    raise PreconditionError(f"strata: family matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", tuple(clean))

    @classmethod
    def from_strings(cls, rows, r: int, base: BaseRing | None = None) -> "QuadraticFamily":
        base = base or BaseRing.rational()
        d = base.d if base.kind == "quadratic" else None
        parsed = []
        for row in rows:
            out = []
            for text in row:
                f = parse_poly(str(text), r + 1, d)
                if base.kind == "finite":
                    f = f.map_coefficients(base.field())
                out.append(f)
            parsed.append(out)
        return cls(tuple(map(tuple, parsed)), r, base)

    @classmethod
    def diagonal_linear(cls, a, base: BaseRing | None = None) -> "QuadraticFamily":
        """q_l = sum_j (sum_i a[i][j] l_i) x_j^2 for an (r+1) x n coefficient matrix a."""
        base = base or BaseRing.rational()
        nv = len(a)
        n = len(a[0])
        zero = MultiPoly(nv)
        diag = [MultiPoly.linear([base.scalar(a[i][j]) for i in range(nv)]) for j in range(n)]
        rows = [[diag[i] if i == j else zero for j in range(n)] for i in range(n)]
        return cls(tuple(map(tuple, rows)), nv - 1, base)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def nvars(self) -> int:
        return self.r + 1

    @property
    def fiber_dim(self) -> int:
        return self.n - 2

    def entry(self, i: int, j: int) -> MultiPoly:
        return self.entries[i][j]

    def is_diagonal(self) -> bool:
        return all(not self.entries[i][j] for i in range(self.n) for j in range(self.n) if i != j)

    def is_linear(self) -> bool:
        return all((not e) or (e.degree() == 1 and e.is_homogeneous()) for row in self.entries for e in row)

    def homogeneous_degree(self) -> int:
        degs = {e.degree() for row in self.entries for e in row if e}
        if not all(e.is_homogeneous() for row in self.entries for e in row):
            raise PreconditionError("strata: entries must be homogeneous to define a family over P^r")
        if len(degs) > 1:
            raise PreconditionError(f"strata: entries have mixed degrees {sorted(degs)}")
        return degs.pop() if degs else 0

    def default_residue(self, field: FiniteField):
        if self.base.kind == "rational":
            return field
        if self.base.kind == "finite":
            if field is not self.base.field():
                raise DomainError(f"strata: family over {self.base.describe()} evaluated in F_{field.q}")
            return field
        return QuadResidueMap(self.base.d, field)

    def matrix_at(self, point, residue=None):
        point = list(point)
        if len(point) != self.nvars:
            raise DomainError(f"strata: parameter point needs {self.nvars} coordinates")
        ff = [x for x in point if isinstance(x, FFElement)]
        if ff and residue is None:
            residue = self.default_residue(ff[0].field)
        if ff:
            F = ff[0].field
            point = [F(x) for x in point]
        elif self.base.kind != "rational":
            raise DomainError(f"strata: points for a family over {self.base.describe()} must lie in a residue field")
        else:
            point = [Fraction(x) for x in point]
        return [[e.evaluate(point, coerce=residue) for e in row] for row in self.entries]

    def specialize(self, point, residue=None) -> QuadraticFormFiber:
        return QuadraticFormFiber(self.matrix_at(point, residue))

    def compile(self, field: FiniteField, residue=None):
        """Coefficient codes (n, n, M) and exponent table (M, r+1) over ``field``."""
        residue = residue or self.default_residue(field)
        flat = [e for row in self.entries for e in row]
        coeffs, exps = _compile_polys(flat, self.nvars, residue)
        return coeffs.reshape(self.n, self.n, -1), exps

    def congruent(self, p) -> "QuadraticFamily":
        """P^T M P for a constant matrix P over the base ring."""
        n = self.n
        nv = self.nvars
        P = [[MultiPoly.constant(nv, self.base.scalar(x)) for x in row] for row in p]
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = MultiPoly(nv)
                for a in range(n):
                    for b in range(n):
                        if P[a][i] and P[b][j] and self.entries[a][b]:
                            acc = acc + P[a][i] * self.entries[a][b] * P[b][j]
                row.append(acc)
            out.append(tuple(row))
        return QuadraticFamily(tuple(out), self.r, self.base)

    def determinant(self) -> MultiPoly:
        d = poly_det(self.entries)
        return d if isinstance(d, MultiPoly) else MultiPoly.constant(self.nvars, d)


def corank_at(fam: QuadraticFamily, point, residue=None) -> int:
    return corank(fam.specialize(point, residue))


# ---------------------------------------------------------------------------
# census


@dataclass
class CensusData:
    """Every parameter point of P^r(F_q) with its evaluated matrix and corank."""

    field: FiniteField
    residue: object
    points: np.ndarray
    mats: np.ndarray
    ranks: np.ndarray
    pivot_products: np.ndarray

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def coranks(self) -> np.ndarray:
        return self.mats.shape[1] - self.ranks


def census_data(fam: QuadraticFamily, q: int, points: np.ndarray | None = None) -> CensusData:
    fam.homogeneous_degree()
    F, res = fam.base.residue(q)
    T = kernels.tables(F)
    coeffs, exps = fam.compile(F, res)
    if points is None:
        points = kernels.projective_points(F.q, fam.r)
    n = fam.n
    mats = np.zeros((len(points), n, n), dtype=np.int64)
    ranks = np.zeros(len(points), dtype=np.int64)
    prods = np.zeros(len(points), dtype=np.int64)
    # disjoint point ranges, merged by position
    for s in range(0, len(points), _EVAL_CHUNK):
        chunk = kernels.evaluate_family(coeffs, exps, points[s : s + _EVAL_CHUNK], T)
        rk, pr = kernels.diagonalize_batch(chunk, T)
        mats[s : s + len(chunk)] = chunk
        ranks[s : s + len(chunk)] = rk
        prods[s : s + len(chunk)] = pr
    return CensusData(F, res, points, mats, ranks, prods)


def corank_census(fam: QuadraticFamily, q: int) -> dict[int, int]:
    """Number of points of P^r(F_q) of each corank (only nonzero counts)."""
    data = census_data(fam, q)
    values, counts = np.unique(data.coranks, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


# ---------------------------------------------------------------------------
# regularity


REGULAR = "REGULAR"
EMPTY_OR_POINTS = "EMPTY-OR-POINTS"
SINGULAR_SUSPECT = "SINGULAR-SUSPECT"


@dataclass(frozen=True)
class LocusVerdict:
    i: int
    expected_dim: int
    counts: dict
    verdict: str


@dataclass(frozen=True)
class JacobianSample:
    """Gradient of det at sampled points: zero gradient marks a singular point of Delta_1."""

    q: int
    corank1_checked: int
    corank1_singular: int
    deeper_checked: int
    deeper_singular: int


@dataclass(frozen=True)
class RegularityReport:
    loci: tuple
    jacobian: tuple
    note: str = "finite-field sampling evidence, not a proof"

    def verdict(self, i: int) -> str:
        for v in self.loci:
            if v.i == i:
                return v.verdict
        raise KeyError(i)

    @property
    def regular(self) -> bool:
        return all(v.verdict != SINGULAR_SUSPECT for v in self.loci)


def _locus_verdict(e: int, counts: dict) -> str:
    qs = sorted(counts)
    if any(counts[q] > q ** (e + 1) / 3 for q in qs):
        return SINGULAR_SUSPECT
    if all(counts[q] == 0 for q in qs) or e <= -1:
        return EMPTY_OR_POINTS
    if e == 0:
        return REGULAR
    ratios = [counts[q] / q**e for q in qs]
    if min(ratios) <= 0 or max(ratios) / min(ratios) > 3:
        return SINGULAR_SUSPECT
    return REGULAR


def regularity_check(fam: QuadraticFamily, primes, jacobian_samples: int = 200) -> RegularityReport:
    """Compare the sizes of the corank loci Delta_i(F_q) with codimension binom(i+1, 2).

    Delta_i is counted cumulatively (corank >= i).  Verdicts are labelled
    sampling evidence.  When n <= 8 the gradient of det is also sampled on
    Delta_1 to probe Sing(Delta_1) = Delta_2.
    """
    primes = list(primes)
    if len(primes) < 2:
        raise PreconditionError("strata: regularity_check needs at least two primes")
    r, n = fam.r, fam.n
    datas = {q: census_data(fam, q) for q in primes}
    loci = []
    for i in range(1, n + 1):
        e = r - comb(i + 1, 2)
        if e < -1:
            break
        counts = {d.q: int(np.count_nonzero(d.coranks >= i)) for d in datas.values()}
        loci.append(LocusVerdict(i, e, counts, _locus_verdict(e, counts)))
    jac = []
    if n <= 8:
        det = fam.determinant()
        grads = [derivative(det, v) for v in range(fam.nvars)]
        for d in datas.values():
            cr = d.coranks
            rows = []
            for mask in (cr == 1, cr >= 2):
                idx = np.flatnonzero(mask)[:jacobian_samples]
                if len(idx) == 0:
                    rows.append((0, 0))
                    continue
                vals = evaluate_polys_at(grads, fam.nvars, d.residue, d.field, d.points[idx])
                rows.append((len(idx), int(np.count_nonzero(np.all(vals == 0, axis=1)))))
            jac.append(JacobianSample(d.q, rows[0][0], rows[0][1], rows[1][0], rows[1][1]))
    return RegularityReport(tuple(loci), tuple(jac))


# ---------------------------------------------------------------------------
# diagonal discriminants


def _normalize(vec):
    lead = next((c for c in vec if c), None)
    if lead is None:
        return None, None
    inv = 1 / lead if not isinstance(lead, FFElement) else lead.inverse()
    return tuple(c * inv for c in vec), lead


@dataclass(frozen=True)
class DiscriminantReport:
    """Linear components of the discriminant of a diagonal linear system."""

    components: tuple
    multiplicities: tuple
    column_component: tuple
    column_scale: tuple
    snc: bool
    reasons: tuple = ()

    def forms(self, nvars: int) -> list[MultiPoly]:
        return [MultiPoly.linear(list(c)) for c in self.components]


def diagonal_discriminant(fam: QuadraticFamily) -> DiscriminantReport:
    """Factor the discriminant prod_j (sum_i a_ij l_i) into hyperplanes.

    Column j maps to component ``column_component[j]`` with
    form_j = column_scale[j] * component (index -1 for an identically zero
    column).  snc holds iff no two columns are proportional, no column is
    zero, and every set of at most r+1 components is independent.
    """
    if not fam.is_diagonal() or not fam.is_linear():
        raise PreconditionError("strata: diagonal_discriminant needs a diagonal family linear in the parameters")
    if not fam.base.is_field:
        raise DomainError("strata: hyperplane normalisation needs field coefficients (Q or F_q)")
    comps: list = []
    mult: list = []
    col_comp, col_scale = [], []
    for j in range(fam.n):
        vec = [fam.base.scalar(c) if not isinstance(c, FFElement) else c for c in fam.entries[j][j].linear_coefficients()]
        norm, lead = _normalize(vec)
        if norm is None:
            col_comp.append(-1)
            col_scale.append(None)
            continue
        if norm in comps:
            k = comps.index(norm)
            mult[k] += 1
        else:
            k = len(comps)
            comps.append(norm)
            mult.append(1)
        col_comp.append(k)
        col_scale.append(lead)
    reasons = []
    if -1 in col_comp:
        reasons.append("a diagonal entry vanishes identically")
    if any(m > 1 for m in mult):
        reasons.append("proportional columns give a non-reduced component")
    for size in range(2, min(len(comps), fam.r + 1) + 1):
        for sub in combinations(range(len(comps)), size):
            if rank_over_field([list(comps[k]) for k in sub]) < size:
                reasons.append(f"components {list(sub)} are linearly dependent")
                break
        else:
            continue
        break
    return DiscriminantReport(tuple(comps), tuple(mult), tuple(col_comp), tuple(col_scale), not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# stratifications


@dataclass(frozen=True)
class Stratum:
    id: str
    corank: int
    expected_dim: int
    subset: tuple | None = None
    equations: tuple = ()
    inequations: tuple = ()
    dim_source: str = "expected"

    @property
    def kind(self) -> str:
        return "corank" if self.subset is None else "snc"


@dataclass(frozen=True)
class Stratification:
    """Ordered strata (dimension non-decreasing) with closure edges (inner, outer)."""

    mode: str
    strata: tuple
    edges: frozenset
    assumptions: tuple = ()
    discriminant: DiscriminantReport | None = None

    def __iter__(self):
        return iter(self.strata)

    def __len__(self):
        return len(self.strata)

    def by_id(self, sid: str) -> Stratum:
        for s in self.strata:
            if s.id == sid:
                return s
        raise KeyError(sid)

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.strata]

    @property
    def dense(self) -> Stratum:
        return self.strata[-1]

    def closure_of(self, sid: str) -> list[str]:
        """Ids of strata contained in the closure of ``sid`` (itself included)."""
        return [sid] + sorted(inner for inner, outer in self.edges if outer == sid)

    def boundary_of(self, sid: str) -> list[str]:
        return [s for s in self.closure_of(sid) if s != sid]

    def locate(self, fam: QuadraticFamily, data: CensusData) -> np.ndarray:
        """Stratum index of every census point (-1 where no stratum applies)."""
        out = np.full(len(data.points), -1, dtype=np.int64)
        if self.discriminant is None or self.mode != "by-snc":
            by_corank = {s.corank: k for k, s in enumerate(self.strata)}
            cr = data.coranks
            for c, k in by_corank.items():
                out[cr == c] = k
            return out
        forms = self.discriminant.forms(fam.nvars)
        vals = evaluate_polys_at(forms, fam.nvars, data.residue, data.field, data.points)
        bits = (vals == 0).astype(np.int64) @ (1 << np.arange(len(forms), dtype=np.int64))
        by_mask = {sum(1 << j for j in s.subset): k for k, s in enumerate(self.strata)}
        for mask, k in by_mask.items():
            out[bits == mask] = k
        return out

    def members(self, fam: QuadraticFamily, point, residue=None) -> list[str]:
        """Strata whose full constraint system holds at ``point`` (exact evaluation)."""
        hits = []
        cr = None
        for s in self.strata:
            if s.subset is None:
                cr = corank_at(fam, point, residue) if cr is None else cr
                if cr == s.corank:
                    hits.append(s.id)
                continue
            F = next((x.field for x in point if isinstance(x, FFElement)), None)
            res = residue or (F if F is not None else None)
            pt = [F(x) for x in point] if F is not None else [Fraction(x) for x in point]
            if all(not f.evaluate(pt, coerce=res) for f in s.equations) and all(
                f.evaluate(pt, coerce=res) for f in s.inequations
            ):
                hits.append(s.id)
        return hits


def snc_stratum_id(subset) -> str:
    return "S{" + ",".join(map(str, subset)) + "}"


def build_stratification(
    fam: QuadraticFamily, mode: str = "by-corank", primes=(), declared=()
) -> Stratification:
    """Corank strata U_i = Delta_i minus Delta_(i+1), or the snc strata S_J.

    by-corank/smooth: the coranks present are read off a census at each
    listed prime (or assumed from the expected codimensions when no prime is
    given).  by-snc: strata are indexed by subsets J of discriminant
    components, ordered by dimension with ties broken lexicographically.
    """
    declared = tuple(declared)
    if mode == "by-snc":
        diagonal = fam.is_diagonal() and fam.is_linear() and fam.base.is_field
        if not diagonal:
            if any(a.startswith("snc") for a in declared):
                strat = build_stratification(fam, "by-corank", primes)
                note = "snc: declared by the user, not verified; corank strata used"
                return Stratification("by-corank", strat.strata, strat.edges, strat.assumptions + (note,))
            raise PreconditionError("strata: by-snc needs a diagonal linear family or an explicit snc declaration")
        return _snc_stratification(fam)
    if mode not in ("by-corank", "smooth"):
        raise DomainError(f"strata: unknown stratification mode {mode!r}")
    assumptions = []
    if primes:
        observed = set()
        for q in primes:
            observed |= set(corank_census(fam, q))
        assumptions.append("corank strata: coranks present read off a census over " + ", ".join(f"q={q}" for q in primes))
    else:
        observed = {i for i in range(fam.n + 1) if fam.r - comb(i + 1, 2) >= 0}
        assumptions.append("corank strata: no census prime given, expected codimensions binom(i+1,2) assumed")
    if mode == "smooth" and observed != {0}:
        bad = sorted(observed - {0})
        raise PreconditionError(f"strata: family declared smooth but fibers of corank {bad} occur")
    k0 = min(observed)
    strata = []
    for i in sorted(observed, reverse=True):
        e = fam.r - comb(i + 1, 2) + comb(k0 + 1, 2)
        src = "expected"
        if e < 0:
            e, src = 0, "observed"
        strata.append(Stratum(f"U{i}", i, e, dim_source=src))
    edges = frozenset((f"U{j}", f"U{i}") for i in observed for j in observed if j > i)
    if len(observed) > 1:
        assumptions.append("closure relations U_j in closure(U_i) for j > i assumed (Delta_j inside Delta_i)")
    return Stratification(mode if mode == "smooth" else "by-corank", tuple(strata), edges, tuple(assumptions))


def _snc_stratification(fam: QuadraticFamily) -> Stratification:
    rep = diagonal_discriminant(fam)
    if not rep.snc:
        raise PreconditionError("strata: discriminant is not snc: " + "; ".join(rep.reasons))
    forms = rep.forms(fam.nvars)
    K = len(forms)
    subsets = [J for size in range(0, min(K, fam.r) + 1) for J in combinations(range(K), size)]
    # dimension non-decreasing, ties lexicographic in J
    subsets.sort(key=lambda J: (fam.r - len(J), J))
    strata = []
    for J in subsets:
        cr = sum(1 for c in rep.column_component if c in J)
        strata.append(
            Stratum(
                snc_stratum_id(J),
                cr,
                fam.r - len(J),
                subset=J,
                equations=tuple(forms[k] for k in J),
                inequations=tuple(forms[k] for k in range(K) if k not in J),
                dim_source="exact",
            )
        )
    edges = frozenset(
        (snc_stratum_id(J), snc_stratum_id(L)) for J in subsets for L in subsets if set(L) < set(J)
    )
    return Stratification("by-snc", tuple(strata), edges, ("snc: verified exactly for a diagonal linear system",), rep)
