import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadbundle import _accel, kernels
from quadbundle.exact import GF, GF_order
from quadbundle.strata import BaseRing, QuadraticFamily


def _brute_zeros(gram, F):
    n = len(gram)
    count = 0
    for x in itertools.product(range(F.q), repeat=n):
        if not any(x):
            continue
        lead = next(v for v in x if v)
        if lead != 1:
            continue
        xs = [F.from_code(v) for v in x]
        acc = F.zero
        for i in range(n):
            for j in range(n):
                acc = acc + F.from_code(int(gram[i][j])) * xs[i] * xs[j]
        count += acc == F.zero
    return count


def test_projective_points_normalized():
    pts = kernels.projective_points(5, 2)
    assert len(pts) == kernels.projective_size(5, 2) == 31
    for p in pts:
        lead = p[np.flatnonzero(p)[0]]
        assert lead == 1
    assert len({tuple(p) for p in pts}) == 31


@pytest.mark.parametrize("q", [3, 5, 9])
def test_count_zeros_matches_brute_force(backend, q):
    F = GF_order(q)
    T = kernels.tables(F)
    rng = np.random.default_rng(q)
    for _ in range(6):
        a = rng.integers(0, q, size=(3, 3))
        g = np.triu(a) + np.triu(a, 1).T
        assert kernels.count_projective_zeros(g, T) == _brute_zeros(g, F)


def test_numba_and_numpy_agree():
    if not _accel.NUMBA_AVAILABLE:
        pytest.skip("numba unavailable")
    for q in (7, 9, 25):
        F = GF_order(q)
        T = kernels.tables(F)
        rng = np.random.default_rng(q)
        a = rng.integers(0, q, size=(20, 4, 4))
        mats = np.triu(a) + np.transpose(np.triu(a, 1), (0, 2, 1))
        out = {}
        for b in ("numpy", "numba"):
            prev = _accel.set_backend(b)
            try:
                out[b] = (
                    kernels.count_projective_zeros_batch(mats, T),
                    *kernels.diagonalize_batch(mats, T),
                )
            finally:
                _accel.set_backend(prev)
        for x, y in zip(out["numpy"], out["numba"]):
            assert np.array_equal(x, y)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 10), min_size=10, max_size=10))
def test_diagonalize_rank_matches_exact(vals):
    from quadbundle.exact import rank_over_field

    F = GF(11)
    T = kernels.tables(F)
    g = np.zeros((4, 4), dtype=np.int64)
    k = 0
    for i in range(4):
        for j in range(i, 4):
            g[i, j] = g[j, i] = vals[k]
            k += 1
    ranks, prods = kernels.diagonalize_batch(g[None], T)
    exact = rank_over_field([[F(int(x)) for x in row] for row in g])
    assert ranks[0] == exact
    if exact == 4:
        from quadbundle.exact import det

        d = det([[F(int(x)) for x in row] for row in g])
        chi = kernels.quadratic_character(np.array([prods[0]]), T)[0]
        assert chi == (1 if d.is_square() else -1)


def test_evaluate_family_matches_exact(backend):
    fam = QuadraticFamily.from_strings([["l0 + 2*l1", "l1"], ["l1", "3*l0*l0 - l1*l1"]], 1, BaseRing.rational())
    with pytest.raises(Exception):
        fam.homogeneous_degree()  # mixed degrees are rejected
    fam = QuadraticFamily.from_strings([["l0 + 2*l1", "l1"], ["l1", "3*l0 - l1"]], 1, BaseRing.rational())
    F = GF(7)
    T = kernels.tables(F)
    coeffs, exps = fam.compile(F)
    pts = kernels.projective_points(7, 1)
    mats = kernels.evaluate_family(coeffs, exps, pts, T)
    for p, m in zip(pts, mats):
        exact = fam.matrix_at([F(int(x)) for x in p])
        assert [[x.v for x in row] for row in exact] == m.tolist()


def test_quadratic_character_values():
    F = GF(7)
    T = kernels.tables(F)
    chi = kernels.quadratic_character(np.arange(7), T)
    assert chi.tolist() == [0, 1, 1, -1, 1, -1, -1]
