import random

import pytest

from quadbundle.engine import assemble_decomposition, smooth_quadric_motive
from quadbundle.errors import PreconditionError
from quadbundle.exact import GF, GF_order
from quadbundle.motives import ArtinTateMotive, ATAtom, double_cover_rep, tate, weight_zero_decompose
from quadbundle.quadform import QuadraticFormFiber, corank, signed_discriminant
from quadbundle.strata import BaseRing, QuadraticFamily, build_stratification
from quadbundle.verify import (
    betti_table,
    count_quadric_points,
    full_census,
    lefschetz_fiber_prediction,
    multi_prime_consistency,
    perverse_degrees,
    perverse_rank_table,
    quadric_count_formula,
)

Q = BaseRing.rational()


def test_lefschetz_examples():
    q = 3
    M = ArtinTateMotive([tate(0), ATAtom("S", double_cover_rep(False), 1), tate(2)])
    assert lefschetz_fiber_prediction(M, {"cover-nonsplit": 0}, q=q) == 1 + q**2
    S = ArtinTateMotive([tate(0), ATAtom("S", double_cover_rep(True), 1), tate(2)])
    assert lefschetz_fiber_prediction(S, q=q) == 1 + 2 * q + q**2
    C = ArtinTateMotive([tate(0), tate(1), tate(2)])
    assert lefschetz_fiber_prediction(C, q=q) == 1 + q + q**2
    rank3 = QuadraticFormFiber([[GF(3)(x) for x in r] for r in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]])
    assert count_quadric_points(rank3) == 1 + q + q**2
    with pytest.raises(PreconditionError):
        lefschetz_fiber_prediction(M, q=q)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closed_form_matches_enumeration(q, n):
    F = GF_order(q)
    rng = random.Random(q * 10 + n)
    for _ in range(5):
        g = [[None] * (n + 1) for _ in range(n + 1)]
        for i in range(n + 1):
            for j in range(i, n + 1):
                g[i][j] = g[j][i] = F.from_code(rng.randrange(q))
        f = QuadraticFormFiber(g)
        rank = f.n - corank(f)
        chi = 0
        if rank and rank % 2 == 0:
            from quadbundle.quadform import descend

            chi = 1 if signed_discriminant(descend(f).form).is_square else -1
        assert quadric_count_formula(q, f.n, rank, chi) == count_quadric_points(f)


def test_smooth_odd_quadric_count():
    for q in (3, 5, 7, 9):
        for n in (1, 3):
            F = GF_order(q)
            f = QuadraticFormFiber([[F.one if i == j else F.zero for j in range(n + 2)] for i in range(n + 2)])
            assert count_quadric_points(f) == (q ** (n + 1) - 1) // (q - 1)


def test_betti_tables():
    assert betti_table(smooth_quadric_motive(3)) == (1, 0, 1, 0, 1, 0, 1)
    assert betti_table(smooth_quadric_motive(2, "trivial")) == (1, 0, 2, 0, 1)
    assert betti_table(ArtinTateMotive([ATAtom("S", double_cover_rep(True), 0)])) == (2,)
    unknown = weight_zero_decompose(ArtinTateMotive([ATAtom("S", double_cover_rep(None), 0)]))
    with pytest.raises(PreconditionError):
        betti_table(unknown)


def test_betti_sums_to_split_count_at_q_one():
    M = smooth_quadric_motive(4, "trivial")
    assert sum(betti_table(M)) == lefschetz_fiber_prediction(M, q=1)


def _diag_net():
    fam = QuadraticFamily.diagonal_linear([[1, 0, 0], [0, 1, 0], [0, 0, 1]], Q)
    strat = build_stratification(fam, "by-snc")
    return fam, strat, assemble_decomposition(fam, strat)


@pytest.mark.parametrize("q", [3, 5, 9])
def test_census_diag_net(q, backend):
    fam, strat, dec = _diag_net()
    L = full_census(fam, strat, dec, q, method="enumerate")
    assert L.ok and L.points == q * q + q + 1
    assert L.total_enumerated == sum(c * k for r in L.rows for c, k in r.enumerated.items())


def test_census_smooth_point_base():
    fam = QuadraticFamily.from_strings([["l0", "0", "0"], ["0", "l0", "0"], ["0", "0", "l0"]], 0, Q)
    strat = build_stratification(fam, "smooth", primes=(5,))
    dec = assemble_decomposition(fam, strat, primes=(5,))
    L = full_census(fam, strat, dec, 5)
    assert L.points == 1 and L.ok and L.total_enumerated == 6


def test_census_regular_net_sampled():
    rng = random.Random(7)
    rows = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            rows[i][j] = rows[j][i] = " + ".join(f"{rng.randint(-5, 5)}*l{k}" for k in range(3))
    fam = QuadraticFamily.from_strings(rows, 2, Q)
    strat = build_stratification(fam, "by-corank", primes=(101,))
    dec = assemble_decomposition(fam, strat, primes=(101,))
    assert [a.label for a in dec.motive.restrict("U0") if a.twist == 1] == ["sign", "triv"]
    L = full_census(fam, strat, dec, 101, sample=1000, seed=1)
    assert L.sampled and L.points == 1000 and L.ok
    assert L.method == "formula"  # 1000 fibers in P^3(F_101) exceed the enumeration budget
    small = build_stratification(fam, "by-corank", primes=(11,))
    dec11 = assemble_decomposition(fam, small, primes=(11,))
    E = full_census(fam, small, dec11, 11, sample=200, seed=2, method="enumerate")
    F = full_census(fam, small, dec11, 11, sample=200, seed=2, method="formula")
    assert E.ok and F.ok
    assert [r.enumerated for r in E.rows] == [r.enumerated for r in F.rows]


def test_census_reports_mismatch_rows():
    # pretend the family is smooth over a base where it is not: a corank mismatch is recorded, not raised
    fam, strat, dec = _diag_net()
    broken = dec.local.copy()
    broken["S{}"] = dec.local["S{0}"]
    dec.local = broken
    L = full_census(fam, strat, dec, 5)
    assert not L.ok and L.mismatches and all(m.stratum == "S{}" for m in L.mismatches)


def test_perverse_table_for_conic_net():
    fam, strat, dec = _diag_net()
    T = perverse_rank_table(dec)
    # constants sit in the odd degrees 2t - fiber_dim, one per Tate class of the fiber
    assert [(e.kind, e.twist) for e in T.at(-1)] == [("const", 0)]
    assert [(e.kind, e.twist) for e in T.at(1)] == [("const", 1)]
    assert sorted(e.stratum for e in T.ic(0)) == ["S{0}", "S{1}", "S{2}"]
    assert not T.constant(0)
    assert T.support == [-1, 0, 1]


def test_perverse_table_class_restrictions():
    fam = QuadraticFamily.diagonal_linear([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]], Q)
    dec = assemble_decomposition(fam, build_stratification(fam, "by-snc"))
    with pytest.raises(PreconditionError):
        perverse_rank_table(dec)
    assert perverse_degrees(dec).support


def test_perverse_table_quadric_threefolds():
    # l0 x0^2 + l1 x1^2 + l2 x2^2 + (l0+l1+l2)(x3^2 + x4^2) is not snc; use the five-column snc system instead
    a = [[1, 0, 0, 1, 1], [0, 1, 0, 1, 2], [0, 0, 1, 1, 3]]
    fam = QuadraticFamily.diagonal_linear(a, Q)
    strat = build_stratification(fam, "by-snc")
    dec = assemble_decomposition(fam, strat)
    T = perverse_rank_table(dec)
    d = fam.fiber_dim
    for t in range(d + 1):
        assert len([e for e in T.constant(2 * t - d)]) == 1
    assert len([e for e in T.ic(0) if e.label == "sign" and len(e.stratum) == 4]) == fam.n
    for q in (5, 7):
        assert full_census(fam, strat, dec, q).ok


def test_multi_prime_consistency_diag_net():
    fam, _, _ = _diag_net()
    rep = multi_prime_consistency(fam, "by-snc", (5, 7, 11))
    assert rep.consistent and set(rep.fingerprints) == {5, 7, 11}
