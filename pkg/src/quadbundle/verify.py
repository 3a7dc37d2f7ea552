"""Point-count oracles for decompositions.

Every prediction here is a Lefschetz trace sum_atoms trace * q^twist,
compared against brute-force enumeration of the fiber quadrics over F_q.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .engine import DecompositionResult, _fiber_characters, assemble_decomposition, frobenius_traces
from .errors import PreconditionError, StratificationGapError
from .motives import ArtinTateMotive, realization_multiset
from .quadform import QuadraticFormFiber
from .strata import QuadraticFamily, Stratification, build_stratification, census_data

ENUMERATION_BUDGET = 50_000_000


def _gram_codes(f: QuadraticFormFiber) -> np.ndarray:
    return np.array([[x.v for x in row] for row in f.rows()], dtype=np.int64)


def count_quadric_points(f: QuadraticFormFiber) -> int:
    """Projective F_q-points of {x^T G x = 0} in P^(n-1), by enumeration."""
    T = kernels.tables(f.field)
    return int(kernels.count_projective_zeros(_gram_codes(f), T))


def quadric_count_formula(q: int, n: int, rank: int, chi: int = 0) -> int:
    """Closed-form point count of a quadric in P^(n-1) of the given rank.

    ``chi`` is the quadratic character of the signed discriminant of the
    nondegenerate part (only read when the rank is even and positive).
    """
    if rank == 0:
        affine = 1
    elif rank % 2:
        affine = q ** (rank - 1)
    else:
        h = rank // 2
        affine = q ** (rank - 1) + chi * (q**h - q ** (h - 1))
    total = affine * q ** (n - rank)
    return (total - 1) // (q - 1)


_DEFAULT_TRACES = {"triv": 1, "cover-split": 2}


def lefschetz_fiber_prediction(atoms: ArtinTateMotive, traces=None, q: int | None = None) -> int:
    """sum over atoms of trace(Frobenius) * q^twist.

    ``traces`` maps character labels to Frobenius traces (trivial atoms
    default to 1, split 2-point covers to 2).  A label without a trace,
    including "unresolved", is a precondition failure; callers that know a
    fiberwise value pass it explicitly and mark the result partial.
    """
    if q is None:
        raise PreconditionError("verify: q is required")
    tr = dict(_DEFAULT_TRACES)
    tr.update(traces or {})
    total = 0
    for a in atoms:
        if a.label not in tr:
            raise PreconditionError(f"verify: no Frobenius trace for atom label {a.label!r}")
        total += tr[a.label] * q**a.twist
    return total


@dataclass
class StratumRow:
    stratum: str
    points: int
    predicted: Counter
    enumerated: Counter
    mismatches: int
    partial: bool
    traces: Counter = field(default_factory=Counter)

    @property
    def enumerated_range(self) -> tuple[int, int] | None:
        if not self.enumerated:
            return None
        return min(self.enumerated), max(self.enumerated)


@dataclass(frozen=True)
class Mismatch:
    point: tuple
    stratum: str
    predicted: int
    enumerated: int
    reason: str = "count"


@dataclass
class PointCountLedger:
    q: int
    method: str
    rows: list
    total_predicted: int
    total_enumerated: int
    mismatches: list = field(default_factory=list)
    sampled: bool = False

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.total_predicted == self.total_enumerated

    @property
    def partial(self) -> bool:
        return any(r.partial for r in self.rows)

    @property
    def points(self) -> int:
        return sum(r.points for r in self.rows)


def _enumerated_counts(data, n: int, method: str, chunk: int = 4096) -> np.ndarray:
    q = data.q
    if method == "enumerate":
        T = kernels.tables(data.field)
        out = np.zeros(len(data.mats), dtype=np.int64)
        for s in range(0, len(data.mats), chunk):
            out[s : s + chunk] = kernels.count_projective_zeros_batch(data.mats[s : s + chunk], T)
        return out.astype(object)
    # closed form from the census rank and discriminant character
    out = np.empty(len(data.mats), dtype=object)
    for rank in np.unique(data.ranks):
        idx = np.flatnonzero(data.ranks == rank)
        rank = int(rank)
        if rank and rank % 2 == 0:
            chi = _fiber_characters(data, idx, n - rank, n)
            for c in (-1, 1):
                out[idx[chi == c]] = quadric_count_formula(q, n, rank, c)
        else:
            out[idx] = quadric_count_formula(q, n, rank)
    return out


def full_census(
    fam: QuadraticFamily,
    strat: Stratification,
    dec: DecompositionResult,
    q: int,
    sample: int | None = None,
    seed: int = 0,
    method: str = "auto",
) -> PointCountLedger:
    """Compare Lefschetz predictions with fiber point counts at every base point.

    ``sample`` restricts to a seeded random subset of P^r(F_q).  ``method``
    is "enumerate" (brute force per fiber), "formula" (closed form from rank
    and discriminant) or "auto" (enumerate within the budget).
    """
    points = None
    F, _ = fam.base.residue(q)
    total_pts = kernels.projective_size(F.q, fam.r)
    if sample is not None and sample < total_pts:
        rng = np.random.default_rng(seed)
        pick = np.sort(rng.choice(total_pts, size=sample, replace=False))
        points = kernels.projective_points(F.q, fam.r)[pick]
    data = census_data(fam, q, points)
    n = fam.n
    if method == "auto":
        cost = len(data.points) * kernels.projective_size(data.q, n - 1)
        method = "enumerate" if cost <= ENUMERATION_BUDGET else "formula"
    if method not in ("enumerate", "formula"):
        raise PreconditionError(f"verify: unknown census method {method!r}")
    loc = strat.locate(fam, data)
    if np.any(loc < 0):
        bad = tuple(int(x) for x in data.points[np.argmax(loc < 0)])
        raise StratificationGapError(f"verify: base point {bad} over F_{data.q} lies in no stratum")
    enum = _enumerated_counts(data, n, method)
    Q = data.q
    rows, mism = [], []
    tot_pred = tot_enum = 0
    for k, s in enumerate(strat.strata):
        idx = np.flatnonzero(loc == k)
        local = dec.local[s.id]
        fixed = sum(Q**a.twist for a in local if a.label == "triv")
        var = sum(Q**a.twist for a in local if a.label != "triv")
        partial = any(a.label not in ("triv", "sign") for a in local)
        if len(idx):
            t, part2 = frobenius_traces(dec.covers[s.id], data, idx, s.corank, n)
            partial = partial or part2
            pred = [fixed + var * int(x) for x in t]
            traces = Counter(int(x) for x in t) if dec.covers[s.id] is not None else Counter()
        else:
            pred, traces = [], Counter()
        e = enum[idx]
        cr = data.coranks[idx]
        for j, (pv, ev, c) in enumerate(zip(pred, e, cr)):
            ev = int(ev)
            if c != s.corank:
                mism.append(Mismatch(tuple(int(x) for x in data.points[idx[j]]), s.id, pv, ev, "corank"))
            elif pv != ev:
                mism.append(Mismatch(tuple(int(x) for x in data.points[idx[j]]), s.id, pv, ev))
        row_mism = sum(1 for m in mism if m.stratum == s.id)
        rows.append(StratumRow(s.id, len(idx), Counter(pred), Counter(int(x) for x in e), row_mism, partial, traces))
        tot_pred += sum(pred)
        tot_enum += sum(int(x) for x in e)
    return PointCountLedger(data.q, method, rows, tot_pred, tot_enum, mism, points is not None)


def betti_table(x) -> tuple:
    """Even Betti numbers from the atoms of a smooth fiber; odd ones vanish."""
    mot = x.local[x.stratification.dense.id] if isinstance(x, DecompositionResult) else x
    if not mot.resolved:
        raise PreconditionError("verify: betti_table needs resolved atoms")
    top = max((a.twist for a in mot), default=0)
    b = [0] * (2 * top + 1)
    for a in mot:
        b[2 * a.twist] += a.degree
    return tuple(b)


@dataclass(frozen=True)
class PerverseEntry:
    kind: str  # "const" or "IC"
    stratum: str
    label: str
    rank: int
    twist: int


@dataclass
class PerverseRankTable:
    """Perverse degree -> constituents of the decomposition of f_* Q[d_X]."""

    dim_total: int
    entries: dict

    def at(self, i: int) -> list:
        return self.entries.get(i, [])

    def constant(self, i: int) -> list:
        return [e for e in self.at(i) if e.kind == "const"]

    def ic(self, i: int) -> list:
        return [e for e in self.at(i) if e.kind == "IC"]

    @property
    def support(self) -> list[int]:
        return sorted(i for i, v in self.entries.items() if v)


def perverse_degrees(dec: DecompositionResult) -> PerverseRankTable:
    """Place every atom at degree 2*twist + dim(stratum) - d_X."""
    fam = dec.family
    d_x = fam.fiber_dim + fam.r
    span = 2 * fam.n + 1
    entries = {i: [] for i in range(-span, span + 1)}
    dims = {s.id: s.expected_dim for s in dec.stratification}
    for a in dec.motive:
        i = 2 * a.twist + dims[a.stratum] - d_x
        kind = "IC" if a.ic else "const"
        entries.setdefault(i, []).append(PerverseEntry(kind, a.stratum, a.label, a.degree, a.twist))
    return PerverseRankTable(d_x, entries)


def perverse_rank_table(dec: DecompositionResult) -> PerverseRankTable:
    """Perverse table for diagonal linear systems of odd-dimensional quadrics with snc discriminant."""
    fam = dec.family
    if not (fam.is_diagonal() and fam.is_linear()):
        raise PreconditionError("verify: perverse_rank_table needs a diagonal linear system")
    if fam.fiber_dim % 2 == 0:
        raise PreconditionError("verify: perverse_rank_table needs odd-dimensional fibers")
    if dec.stratification.mode != "by-snc":
        raise PreconditionError("verify: perverse_rank_table needs the snc stratification")
    return perverse_degrees(dec)


def _fingerprint(dec: DecompositionResult) -> dict:
    return {sid: tuple(sorted(realization_multiset(m).items())) for sid, m in dec.local.items()}


@dataclass
class ConsistencyReport:
    fingerprints: dict  # prime -> {stratum id -> sorted multiset}
    consistent: bool
    differing: list


def multi_prime_consistency(fam: QuadraticFamily, mode: str, primes, declared=()) -> ConsistencyReport:
    """Per-stratum atom multisets inferred one prime at a time must agree."""
    prints = {}
    for q in primes:
        strat = build_stratification(fam, mode, primes=(q,), declared=declared)
        prints[q] = _fingerprint(assemble_decomposition(fam, strat, primes=(q,)))
    ref = next(iter(prints.values()), {})
    differing = [q for q, fp in prints.items() if fp != ref]
    return ConsistencyReport(prints, not differing, differing)
