from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadbundle.errors import DomainError, UnsupportedCharacteristicError
from quadbundle.exact import (
    GF,
    GF_order,
    MultiPoly,
    QuadInt,
    QuadResidueMap,
    det,
    inverse,
    is_prime,
    kernel_basis,
    matmul,
    parse_poly,
    poly_det,
    poly_sqrt,
    prime_power,
    rank_over_field,
    residue_field_for,
    rref,
    square_class,
    substitute,
)

FIELDS = [GF(3), GF(5), GF(7), GF(3, 2), GF(5, 2), GF(3, 3)]


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"F{F.q}")
def test_field_axioms(F):
    els = list(F.elements())
    assert len(els) == F.q
    zero, one = F.zero, F.one
    for a in els:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if a != zero:
            assert a * a.inverse() == one
    g = F.primitive_element()
    powers = {(g**k).v for k in range(F.q - 1)}
    assert len(powers) == F.q - 1


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"F{F.q}")
def test_squares_are_half(F):
    nz = [a for a in F.elements() if a != F.zero]
    squares = [a for a in nz if a.is_square()]
    assert len(squares) == (F.q - 1) // 2
    for a in squares:
        assert a.sqrt() ** 2 == a


def test_field_errors():
    with pytest.raises(DomainError):
        GF(9)
    with pytest.raises(DomainError):
        GF_order(12)
    assert prime_power(81) == (3, 4)
    assert is_prime(211) and not is_prime(221)


def test_fraction_into_finite_field():
    F = GF(5)
    assert F(Fraction(1, 2)) * 2 == F.one
    with pytest.raises(DomainError):
        F(Fraction(1, 5))


def test_quadint_arithmetic():
    s = QuadInt(0, 1, -5)
    assert s * s == QuadInt(-5, 0, -5)
    assert QuadInt(1, 2, -5).norm() == 21
    assert (QuadInt(3, 1, -5) * QuadInt(3, -1, -5)) == QuadInt(14, 0, -5)
    assert QuadInt(-5, 0, -5).is_square_in_fraction_field()
    assert not s.is_square_in_fraction_field()


def test_residue_map_is_a_ring_map():
    for p in (3, 7, 23):
        F = residue_field_for(-5, p)
        m = QuadResidueMap(-5, F)
        s = QuadInt(0, 1, -5)
        assert m(s) ** 2 == F(-5)
        a, b = QuadInt(2, 3, -5), QuadInt(-1, 4, -5)
        assert m(a * b) == m(a) * m(b)
        assert m(a + b) == m(a) + m(b)


def test_square_class():
    assert square_class(Fraction(9, 4))
    assert not square_class(Fraction(-1))
    assert square_class(GF(5)(4)) and not square_class(GF(5)(2))


small = st.integers(-6, 6)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_rank_kernel_consistent(m):
    d = det(m)
    r = rank_over_field(m)
    ker = kernel_basis(m)
    assert (d != 0) == (r == 3)
    assert len(ker) == 3 - r
    for v in ker:
        assert all(sum(Fraction(m[i][j]) * v[j] for j in range(3)) == 0 for i in range(3))
    if d != 0:
        inv = inverse(m)
        assert matmul(m, inv) == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_poly_det_matches_numeric_det(m):
    P = [[MultiPoly.constant(2, Fraction(x)) for x in row] for row in m]
    assert poly_det(P).constant_term() == det(m)


def test_rref_pivots():
    R, piv = rref([[1, 2, 3], [2, 4, 7]])
    assert piv == [0, 2]


def test_parse_poly_grammar():
    f = parse_poly("3*l0^2 - l1*l2 + 1/2*l2^2", 3)
    assert f.evaluate([1, 1, 2]) == 3 - 2 + 2
    with pytest.raises(DomainError):
        parse_poly("l0*x", 2)
    with pytest.raises(DomainError):
        parse_poly("l3", 3)
    with pytest.raises(DomainError):
        parse_poly("l0/l1", 2)
    g = parse_poly("-4*s*l0", 1, d=-5)
    assert g.evaluate([1]) == QuadInt(0, -4, -5)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_poly_sqrt_of_squares(a, b):
    f = MultiPoly.linear([Fraction(x) for x in a]) * MultiPoly.linear([Fraction(x) for x in b])
    sq = poly_sqrt(f * f)
    assert sq is not None and sq * sq == f * f


def test_poly_sqrt_rejects_nonsquares():
    assert poly_sqrt(parse_poly("l0*l1", 2)) is None
    assert poly_sqrt(parse_poly("2*l0^2", 2)) is None
    assert poly_sqrt(parse_poly("-l0^2", 2)) is None


def test_substitute_linear():
    f = parse_poly("l0*l1", 2)
    images = [MultiPoly.linear([Fraction(1), Fraction(0)]), MultiPoly.linear([Fraction(1), Fraction(1)])]
    g = substitute(f, images)
    assert g == parse_poly("l0^2 + l0*l1", 2)


def test_char_two_is_excluded_downstream():
    from quadbundle.quadform import QuadraticFormFiber

    with pytest.raises(UnsupportedCharacteristicError):
        QuadraticFormFiber([[GF(2).one]])
