from fractions import Fraction

import pytest

from quadbundle.errors import DomainError, PreconditionError
from quadbundle.motives import (
    LOWER,
    ArtinRep,
    ArtinTateMotive,
    ATAtom,
    ATEndomorphism,
    PartialDecompositionError,
    builtin_group,
    builtin_groups,
    check_witness,
    constituents,
    double_cover_rep,
    fairness_check,
    hom_dimension,
    inner_product,
    realization_multiset,
    sign_rep,
    split_idempotent,
    tate,
    transitive_gsets,
    trivial_rep,
    weight_zero_decompose,
)


@pytest.mark.parametrize("name,order,classes", [("1", 1, 1), ("Z/2", 2, 2), ("Z/4", 4, 3), ("Z/2xZ/2", 4, 5),
                                                ("S3", 6, 4), ("D4", 8, 8), ("A4", 12, 5), ("S4", 24, 11)])
def test_group_orders_and_subgroup_classes(name, order, classes):
    G = builtin_group(name)
    assert G.order == order
    assert len(G.subgroup_classes) == classes


def test_s3_transitive_gsets():
    G = builtin_group("S3")
    assert sorted(A.degree for A in transitive_gsets(G)) == [1, 2, 3, 6]
    X = next(A for A in transitive_gsets(G) if A.degree == 3)
    assert hom_dimension(X, X) == 2
    labels = sorted(c.label for c in constituents(X))
    assert labels == ["std", "triv"]


@pytest.mark.parametrize("name", ["Z/2", "Z/3", "Z/4", "Z/2xZ/2", "S3"])
def test_character_tables_are_orthonormal(name):
    G = builtin_group(name)
    tab = G.table
    for i, a in enumerate(tab):
        assert a.character[0] == a.degree
        for j, b in enumerate(tab):
            ip = inner_product(a.character, b.character, G)
            assert (ip > 0) == (i == j)
    # the regular representation contains every irreducible
    reg = ArtinRep.regular(G)
    got = {c.label: c.multiplicity for c in constituents(reg)}
    assert set(got) == {t.label for t in tab}


def test_regular_rep_degree_sum():
    for name in ("Z/3", "Z/4", "S3"):
        G = builtin_group(name)
        assert sum(c.multiplicity * c.degree for c in constituents(ArtinRep.regular(G))) == G.order


def test_untabled_group_falls_back_to_orbits():
    G = builtin_group("A4")
    X = transitive_gsets(G)[-1]
    cs = constituents(X)
    assert all(not c.exact for c in cs) or X.degree == 1


def test_unresolved_matrix_rep_raises_partial():
    G = builtin_group("D4")
    r = ArtinRep.from_matrices(G, [[[0, -1], [1, 0]], [[1, 0], [0, -1]]])
    with pytest.raises(PartialDecompositionError):
        constituents(r)


def test_double_cover_and_weight_zero():
    assert sorted(c.label for c in constituents(double_cover_rep(False))) == ["sign", "triv"]
    split = constituents(double_cover_rep(True))
    assert [(c.label, c.multiplicity) for c in split] == [("triv", 2)]
    M = weight_zero_decompose(ArtinTateMotive([ATAtom("S", double_cover_rep(None), 1)]))
    assert sorted(a.label for a in M) == ["triv", "unresolved"]
    assert not M.resolved


def test_motive_algebra_and_fingerprint():
    M = ArtinTateMotive([tate(0), ATAtom("S", sign_rep(), 1), tate(1)])
    assert str(M) == "1 + sign(-1)[-2] + 1(-1)[-2]"
    assert M.twisted(1) == ArtinTateMotive([tate(1), ATAtom("S", sign_rep(), 2), tate(2)])
    fp = realization_multiset(M + M)
    assert fp[(1, 1, "sign")] == 2
    with pytest.raises(DomainError):
        tate(-1)


def test_fairness():
    assert fairness_check(2, 2) and not fairness_check(1, 2)


def test_split_sign_projector():
    M = ArtinTateMotive([ATAtom("S", double_cover_rep(False), 0)])
    e = ATEndomorphism(M, {(0, 0): [[Fraction(1, 2), Fraction(-1, 2)], [Fraction(-1, 2), Fraction(1, 2)]]})
    ker, img, wit = split_idempotent(e)
    assert [a.label for a in ker] == ["triv"]
    assert [a.label for a in img] == ["sign"]
    assert all(check_witness(w) for w in wit)


def test_endomorphism_preconditions():
    M = ArtinTateMotive([tate(0), tate(1)])
    with pytest.raises(PreconditionError):
        ATEndomorphism(M, {(0, 1): [[1]]})  # towards a smaller twist
    e = ATEndomorphism(M, {(0, 0): [[1]], (1, 1): [[0]]})
    assert e.blocks[(1, 0)] == LOWER
    with pytest.raises(PreconditionError):
        split_idempotent(ATEndomorphism(M, {(0, 0): [[2]]}))
    N = ArtinTateMotive([ATAtom("S", trivial_rep(), 0), ATAtom("S", sign_rep(), 0)])
    with pytest.raises(PreconditionError):
        ATEndomorphism(N, {(0, 1): [[1]]})  # sign -> triv is not an intertwiner


def test_hom_dimension_rejects_mixed_groups():
    a = transitive_gsets(builtin_group("Z/2"))[0]
    b = transitive_gsets(builtin_group("Z/3"))[0]
    with pytest.raises(DomainError):
        hom_dimension(a, b)


def test_all_builtins_close():
    assert [G.order for G in builtin_groups()] == [1, 2, 3, 4, 4, 6, 8, 12, 24]
