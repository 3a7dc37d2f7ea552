"""Decomposition engine for quadric bundles.

Per stratum of constant corank i the fibers are cones with vertex P^(i-1)
over a smooth quadric of dimension n-2-i, so the stratum motive is a sum of
Tate motives plus a twisted smooth-quadric decomposition.  Even-dimensional
smooth quadrics contribute the Clifford-centre double cover at the middle
twist.  The global result wraps these local pieces as intermediate
extensions: atoms already explained by restrictions from larger strata are
removed, and what is left becomes a new summand supported on the stratum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import PreconditionError
from .exact import MultiPoly, QuadInt, kernel_basis, poly_sqrt, square_class, substitute
from .motives import (
    ArtinTateMotive,
    ATAtom,
    double_cover_rep,
    fairness_check,
    hom_dimension,
    realization_multiset,
    sign_rep,
    tate,
    trivial_rep,
    weight_zero_decompose,
)
from .motives.reps import ArtinRep
from .quadform import delta_sign
from .strata import (
    CensusData,
    QuadraticFamily,
    Stratification,
    Stratum,
    census_data,
    evaluate_polys_at,
)

TRIVIAL = "trivial"
SIGN = "sign"
UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class CoverDescriptor:
    """Degree-2 Clifford-centre cover over a stratum.

    ``function`` is a polynomial in the parameters whose square class at a
    point of the stratum is the fiber's signed discriminant; None means the
    discriminant is read fiberwise.  ``boundary_orders`` maps adjacent
    boundary strata to the vanishing order of the function there.
    """

    stratum: str
    degree: int
    monodromy: str
    function: MultiPoly | None = None
    method: str = "exact"
    boundary_orders: dict = field(default_factory=dict)
    evidence: str = ""

    def __post_init__(self):
        if (self.degree == 1) != (self.monodromy == TRIVIAL):
            raise PreconditionError("engine: a cover has degree 1 exactly when its monodromy is trivial")

    @property
    def split(self) -> bool | None:
        if self.monodromy == UNRESOLVED:
            return None
        return self.monodromy == TRIVIAL


def _monodromy_arg(cover) -> str:
    if isinstance(cover, CoverDescriptor):
        return cover.monodromy
    if cover in (TRIVIAL, SIGN, UNRESOLVED):
        return cover
    if cover is True:
        return TRIVIAL
    if cover is False:
        return SIGN
    raise PreconditionError(f"engine: cannot read a cover from {cover!r}")


def smooth_quadric_motive(n: int, cover=None, stratum: str = "S") -> ArtinTateMotive:
    """Motive of a smooth quadric of relative dimension n.

    Odd n: sum_{i=0..n} 1(-i)[-2i].  Even n = 2m: the same without i = m,
    plus the permutation representation of the Clifford-centre cover at
    twist m.
    """
    if n < 0:
        raise PreconditionError("engine: relative dimension must be non-negative")
    if n % 2:
        return ArtinTateMotive(tate(i, stratum) for i in range(n + 1))
    if cover is None:
        raise PreconditionError("engine: an even-dimensional quadric needs its Clifford-centre cover")
    m = n // 2
    mono = _monodromy_arg(cover)
    split = None if mono == UNRESOLVED else mono == TRIVIAL
    atoms = [tate(i, stratum) for i in range(n + 1) if i != m]
    atoms.append(ATAtom(stratum, double_cover_rep(split), m))
    return ArtinTateMotive(atoms)


def stratum_motive(fam: QuadraticFamily, stratum: Stratum, cover=None) -> ArtinTateMotive:
    """h(P^(i-1)) + h(smooth quadric of dim n-2-i)(-i)[-2i] for corank i."""
    i = stratum.corank
    k = fam.n - i
    atoms = [tate(j, stratum.id) for j in range(i)]
    mot = ArtinTateMotive(atoms)
    if k - 2 >= 0:
        mot = mot + smooth_quadric_motive(k - 2, cover, stratum.id).twisted(i)
    return mot


# ---------------------------------------------------------------------------
# covers


def _needs_cover(fam: QuadraticFamily, stratum: Stratum) -> bool:
    k = fam.n - stratum.corank
    return k >= 2 and k % 2 == 0


def _linear_span(fam: QuadraticFamily, strat: Stratification, subset) -> list[MultiPoly] | None:
    """Parametrisation of D_J by its kernel basis (None: J empty, identity)."""
    if not subset:
        return None
    rep = strat.discriminant
    rows = [list(rep.components[k]) for k in subset]
    basis = kernel_basis(rows)
    dim = len(basis)
    return [MultiPoly.linear([basis[t][i] for t in range(dim)]) for i in range(fam.nvars)]


def _is_square_poly(g: MultiPoly, images=None) -> bool | None:
    h = g if images is None else substitute(g, images)
    coeffs = list(h.terms.values())
    if any(isinstance(c, QuadInt) for c in coeffs):
        if h.degree() == 0:
            return square_class(h.constant_term())
        return None
    return poly_sqrt(h) is not None


def _diagonal_function(fam: QuadraticFamily, strat: Stratification, subset, corank: int) -> MultiPoly:
    """(-1)^(m+1) times the product of the diagonal entries not vanishing on D_J."""
    rep = strat.discriminant
    k = fam.n - corank
    sign = delta_sign(k)
    g = MultiPoly.constant(fam.nvars, fam.base.scalar(sign))
    for j, comp in enumerate(rep.column_component):
        if comp not in subset:
            g = g * fam.entries[j][j]
    return g


def _fiber_characters(data: CensusData, idx: np.ndarray, corank: int, n: int) -> np.ndarray:
    """Quadratic character of the signed discriminant of the descended fibers."""
    T = kernels.tables(data.field)
    chi = kernels.quadratic_character(data.pivot_products[idx], T)
    if delta_sign(n - corank) == -1 and (data.q - 1) // 2 % 2 == 1:
        chi = -chi
    return chi


class _Samples:
    """Census data per prime, computed once and shared by all sampled decisions."""

    def __init__(self, fam: QuadraticFamily, strat: Stratification, primes):
        self.fam = fam
        self.strat = strat
        self.primes = tuple(primes)
        self._cache = {}

    def get(self, q):
        if q not in self._cache:
            data = census_data(self.fam, q)
            self._cache[q] = (data, self.strat.locate(self.fam, data))
        return self._cache[q]

    def points_of(self, sid: str):
        k = self.strat.ids.index(sid)
        for q in self.primes:
            data, loc = self.get(q)
            yield data, np.flatnonzero(loc == k)


def clifford_cover(fam: QuadraticFamily, strat: Stratification, stratum: Stratum, primes=(), _samples=None) -> CoverDescriptor:
    """Clifford-centre cover of the descended fibers over ``stratum``.

    Exact for snc strata of diagonal systems and for the open corank-0
    stratum (function +-det); otherwise decided by the square classes of the
    fiber discriminants sampled over ``primes`` (a non-square witnesses sign
    monodromy; no points leaves it unresolved).
    """
    k = fam.n - stratum.corank
    if k % 2 or k < 2:
        raise PreconditionError(f"engine: descended forms on {stratum.id} have {k} variables; no Clifford-centre cover")
    sid = stratum.id
    if stratum.subset is not None and strat.discriminant is not None:
        g = _diagonal_function(fam, strat, stratum.subset, stratum.corank)
        images = _linear_span(fam, strat, stratum.subset)
        sq = _is_square_poly(g, images)
        rep = strat.discriminant
        orders = {}
        K = len(rep.components)
        for kk in range(K):
            if kk in stratum.subset:
                continue
            bid = "S{" + ",".join(map(str, sorted(stratum.subset + (kk,)))) + "}"
            if bid in strat.ids:
                orders[bid] = sum(1 for c in rep.column_component if c == kk)
        mono = TRIVIAL if sq else SIGN
        return CoverDescriptor(sid, 1 if sq else 2, mono, g, "exact", orders, "square test of the restricted discriminant")
    if stratum.corank == 0 and stratum.id == strat.dense.id:
        g = fam.determinant() * fam.base.scalar(delta_sign(fam.n))
        sq = _is_square_poly(g)
        if sq is not None:
            mono = TRIVIAL if sq else SIGN
            return CoverDescriptor(sid, 1 if sq else 2, mono, g, "exact", {}, "square test of (-1)^(m+1) det")
    samples = _samples or _Samples(fam, strat, primes)
    seen = 0
    for data, idx in samples.points_of(sid):
        if len(idx) == 0:
            continue
        chi = _fiber_characters(data, idx, stratum.corank, fam.n)
        seen += len(idx)
        if np.any(chi == -1):
            pos = int(idx[np.argmax(chi == -1)])
            pt = tuple(int(x) for x in data.points[pos])
            return CoverDescriptor(sid, 2, SIGN, None, "sampled", {}, f"non-square discriminant at {pt} over F_{data.q}")
    if seen:
        return CoverDescriptor(sid, 1, TRIVIAL, None, "sampled", {}, f"all {seen} sampled discriminants are squares")
    return CoverDescriptor(sid, 2, UNRESOLVED, None, "sampled", {}, "no sampled points on the stratum")


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class RamificationVerdict:
    stratum: str
    boundary: str
    order: int | None
    verdict: str
    fair: bool | None


@dataclass
class DecompositionResult:
    """Global decomposition plus the per-stratum local pieces it restricts to."""

    family: QuadraticFamily
    stratification: Stratification
    motive: ArtinTateMotive
    local: dict
    covers: dict
    stalks: dict
    ramification: list
    ledger: list
    warnings: list = field(default_factory=list)

    def restrict(self, sid: str) -> ArtinTateMotive:
        """Restriction of the global result to a stratum, IC wrappers stripped."""
        own = [a.on(sid, ic=False) for a in self.motive.restrict(sid)]
        return ArtinTateMotive(own + list(self.stalks.get(sid, ())))

    def local_fingerprints(self) -> dict:
        return {sid: realization_multiset(m) for sid, m in self.local.items()}

    @property
    def resolved(self) -> bool:
        return self.motive.resolved and all(m.resolved for m in self.local.values())


def _stalk(atom: ATAtom, cover: CoverDescriptor | None, fam, strat, sigma: Stratum, samples) -> ATAtom | None:
    """Stalk on ``sigma`` of the intermediate extension of a rank-one atom."""
    if atom.label == "triv":
        return ATAtom(sigma.id, trivial_rep(), atom.twist)
    if atom.label == UNRESOLVED or cover is None:
        return ATAtom(sigma.id, ArtinRep.unresolved(), atom.twist)
    if cover.method == "exact" and sigma.subset is not None and strat.discriminant is not None:
        rep = strat.discriminant
        tau = strat.by_id(cover.stratum)
        new = [kk for kk in sigma.subset if kk not in tau.subset]
        orders = [sum(1 for c in rep.column_component if c == kk) for kk in new]
        if any(o % 2 for o in orders):
            return None
        g = _diagonal_function(fam, strat, sigma.subset, sigma.corank)
        g = g * fam.base.scalar(delta_sign(fam.n - tau.corank) * delta_sign(fam.n - sigma.corank))
        sq = _is_square_poly(g, _linear_span(fam, strat, sigma.subset))
        return ATAtom(sigma.id, trivial_rep() if sq else sign_rep(), atom.twist)
    # sampled model: the local system dies where its square-class function vanishes
    vanishes = True
    seen = 0
    values = []
    for data, idx in samples.points_of(sigma.id):
        if len(idx) == 0:
            continue
        seen += len(idx)
        if cover.function is not None:
            vals = evaluate_polys_at([cover.function], fam.nvars, data.residue, data.field, data.points[idx])[:, 0]
            if np.any(vals != 0):
                vanishes = False
                values.append(kernels.quadratic_character(vals[vals != 0], kernels.tables(data.field)))
    if cover.function is None or not seen:
        return ATAtom(sigma.id, ArtinRep.unresolved(), atom.twist)
    if vanishes:
        return None
    allv = np.concatenate(values)
    return ATAtom(sigma.id, sign_rep() if np.any(allv == -1) else trivial_rep(), atom.twist)


def _subtract(local: ArtinTateMotive, restricted: list) -> tuple[list, list]:
    pool = Counter((a.twist, a.label) for a in local)
    extra = []
    for a in restricted:
        key = (a.twist, a.label)
        if pool[key] > 0:
            pool[key] -= 1
        else:
            extra.append(a)
    residual = []
    for a in local:
        key = (a.twist, a.label)
        if pool[key] > 0:
            pool[key] -= 1
            residual.append(a)
    return residual, extra


def _ramification(cover: CoverDescriptor, strat: Stratification) -> list:
    if cover.monodromy == TRIVIAL:
        return []
    out = []
    G_set = double_cover_rep(False)
    end_open = hom_dimension(G_set, G_set)
    for bid, order in sorted(cover.boundary_orders.items()):
        if order % 2:
            verdict = "ramified: one-point fibers over the boundary (well-ramified)"
            end_closed = 1
        else:
            verdict = "unramified: extends as an etale double cover (well-ramified)"
            end_closed = end_open
        out.append(RamificationVerdict(cover.stratum, bid, order, verdict, fairness_check(end_closed, end_open)))
    if cover.method != "exact":
        for bid in strat.boundary_of(cover.stratum):
            out.append(RamificationVerdict(cover.stratum, bid, None, "unknown: no exact vanishing order", None))
    return out


def assemble_decomposition(fam: QuadraticFamily, strat: Stratification, primes=()) -> DecompositionResult:
    """Decomposition over a stratification as a sum of i_* j_!* of Artin-Tate atoms.

    ``primes`` feed the sampled decisions (covers and stalks off the exact
    snc setting).  Strata are processed from the dense one down; each local
    motive minus the stalks of summands already placed becomes the new
    summand on that stratum.
    """
    samples = _Samples(fam, strat, primes)
    ledger = list(strat.assumptions)
    ledger.append("twist pin: the Clifford-centre factor of an even quadric of dim 2m sits at (-m)[-2m]")
    ledger.append("stratum motives: cone over a smooth quadric with vertex P^(i-1); flag-bundle resolution not built")
    covers, local = {}, {}
    for s in strat.strata:
        cover = clifford_cover(fam, strat, s, primes, samples) if _needs_cover(fam, s) else None
        covers[s.id] = cover
        local[s.id] = weight_zero_decompose(stratum_motive(fam, s, cover))
        if cover is not None and cover.method != "exact":
            ledger.append(f"cover on {s.id}: {cover.monodromy} by sampling ({cover.evidence})")
        elif cover is not None:
            ledger.append(f"cover on {s.id}: {cover.monodromy} ({cover.evidence})")
        if cover is not None and cover.monodromy == UNRESOLVED:
            ledger.append(f"unresolved: monodromy on {s.id}")
    dense = strat.dense.id
    placed: list[ATAtom] = []
    stalks: dict = {}
    warnings = []
    for sigma in reversed(strat.strata):
        restricted = []
        for a in placed:
            if sigma.id in strat.boundary_of(a.stratum):
                st = _stalk(a, covers[a.stratum], fam, strat, sigma, samples)
                if st is not None:
                    restricted.append(st)
        stalks[sigma.id] = restricted
        residual, extra = _subtract(local[sigma.id], restricted)
        if extra:
            warnings.append(f"restriction to {sigma.id} exceeds its local motive by {[str(a) for a in extra]}")
        for a in residual:
            # constant sheaves on the open stratum are not wrapped; a nontrivial
            # local system there is, unless the stratum has no boundary
            ic = sigma.id != dense or (a.label != "triv" and bool(strat.boundary_of(dense)))
            placed.append(a.on(sigma.id, ic=ic))
    if strat.mode != "by-snc" and len(strat) > 1:
        ledger.append("IC stalks: a rank-one local system is taken to vanish where its square-class function does")
    ram = []
    for c in covers.values():
        if c is not None:
            ram.extend(_ramification(c, strat))
    if ram:
        ledger.append("well-ramifiedness: parity of the vanishing order; Fano-scheme connectivity recorded, not recomputed")
    return DecompositionResult(fam, strat, ArtinTateMotive(placed), local, covers, stalks, ram, ledger, warnings)


def frobenius_traces(cover: CoverDescriptor | None, data: CensusData, idx: np.ndarray, corank: int, n: int):
    """Trace of Frobenius on the sign part of the cover at each point (+-1), and a partial flag."""
    if cover is None:
        return np.ones(len(idx), dtype=np.int64), False
    if cover.function is not None:
        vals = evaluate_polys_at([cover.function], cover.function.nvars, data.residue, data.field, data.points[idx])[:, 0]
        return kernels.quadratic_character(vals, kernels.tables(data.field)), False
    return _fiber_characters(data, idx, corank, n), cover.monodromy == UNRESOLVED
