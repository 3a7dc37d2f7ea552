import pytest

from quadbundle.errors import PreconditionError
from quadbundle.exact import GF, QuadInt, QuadResidueMap, residue_field_for
from quadbundle.quadform import (
    QuadraticFormFiber,
    corank,
    delta_sign,
    descend,
    reduce_matrix,
    signed_discriminant,
    smooth_over_Z_check,
)
from quadbundle.verify import count_quadric_points

F3, F5 = GF(3), GF(5)


def _fiber(F, rows):
    return QuadraticFormFiber([[F(x) for x in r] for r in rows])


def _H():
    s = QuadInt(0, 1, -5)
    z = QuadInt(0, 0, -5)

    def c(a):
        return QuadInt(a, 0, -5)

    return [[-4 * s, c(9), z, z], [c(9), 4 * s, z, z], [z, z, c(2), s], [z, z, s, c(-2)]]


def test_symmetry_required():
    with pytest.raises(PreconditionError):
        _fiber(F3, [[1, 1], [0, 1]])


def test_corank_examples():
    assert corank(_fiber(F5, [[0] * 3] * 3)) == 3
    assert corank(_fiber(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])) == 1
    F = residue_field_for(-5, 3)
    assert corank(reduce_matrix(_H(), QuadResidueMap(-5, F))) == 0


def test_descend_rank_two_in_four_variables():
    f = _fiber(F5, [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    d = descend(f)
    assert d.form.n == 2 and corank(d.form) == 0
    assert len(d.radical) == 2
    for i, w in enumerate(d.witness):
        for j, v in enumerate(d.witness):
            val = sum(f.gram[a][b] * w[a] * v[b] for a in range(4) for b in range(4))
            assert val == d.form.gram[i][j]


def test_signed_discriminant_and_counts():
    # split: diag(1,1,1,1) over F_3 is hyperbolic (delta = +1)
    f = _fiber(F3, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    sd = signed_discriminant(f)
    assert sd.split and count_quadric_points(f) == 16
    # xy = zt is split
    g = _fiber(F3, [[0, 2, 0, 0], [2, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert signed_discriminant(g).split and count_quadric_points(g) == 16
    # H over a prime above 3: delta = det H = -1, non-square mod 3
    F = residue_field_for(-5, 3)
    h = reduce_matrix(_H(), QuadResidueMap(-5, F))
    sd = signed_discriminant(h)
    assert not sd.split and count_quadric_points(h) == 10


def test_delta_sign_convention():
    assert delta_sign(2) == -1 and delta_sign(4) == 1 and delta_sign(6) == -1
    with pytest.raises(PreconditionError):
        delta_sign(3)


def test_split_undefined_in_odd_dimension():
    sd = signed_discriminant(_fiber(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(PreconditionError):
        sd.split


def test_smooth_over_Z():
    cert = smooth_over_Z_check(_H())
    assert cert.smooth and cert.det == QuadInt(-1, 0, -5)
    assert not smooth_over_Z_check([[1, 0], [0, 1]]).smooth
    assert smooth_over_Z_check([[0, 1], [1, 0]]).smooth


def test_zero_form_counts_all_points():
    assert count_quadric_points(_fiber(F3, [[0] * 3] * 3)) == 13
