from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quotvir.errors import DataError, RingMismatchError
from quotvir.polynomial import symbol
from quotvir.resultant import UniPoly, determinant, resultant, sylvester_matrix

ints = st.integers(-6, 6)
polys = st.lists(ints, min_size=1, max_size=5).filter(lambda c: c[-1] != 0).map(UniPoly)


def to_sympy(p: UniPoly, x):
    return sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(map(Fraction, p.coefficients)))


@given(polys, polys)
@settings(max_examples=60)
def test_matches_sympy(f, g):
    # sympy returns Res(g, f) when deg f < deg g; compare only where conventions agree
    if f.degree < g.degree:
        f, g = g, f
    x = sympy.Symbol("x")
    expected = sympy.resultant(to_sympy(f, x), to_sympy(g, x), x)
    assert resultant(f, g) == Fraction(int(sympy.numer(expected)), int(sympy.denom(expected)))


@given(polys, polys, polys)
@settings(max_examples=40)
def test_multiplicative_in_second_argument(f, g, h):
    assert resultant(f, g * h) == resultant(f, g) * resultant(f, h)


@given(polys, polys)
@settings(max_examples=40)
def test_antisymmetry(f, g):
    sign = (-1) ** (f.degree * g.degree)
    assert resultant(g, f) == sign * resultant(f, g)


@given(polys, polys, ints)
@settings(max_examples=40)
def test_shift_is_a_ring_homomorphism(f, g, c):
    assert (f * g).shift(c) == f.shift(c) * g.shift(c)
    assert f.shift(c)(0) == f(c)


def test_linear_sign_convention():
    # Res(f, g) = lc(f)^deg g * prod g(roots of f), so Res(x - a, x - b) = a - b
    a, b = symbol("a"), symbol("k")
    assert resultant(UniPoly([-a, 1]), UniPoly([-b, 1])) == a - b


@given(st.lists(ints, min_size=1, max_size=3), st.lists(ints, min_size=1, max_size=3), ints)
@settings(max_examples=40)
def test_root_product_formula(roots_f, roots_g, lc):
    # Res(f, g) = lc(f)^deg g prod g(roots of f)
    lc = lc or 1
    f = UniPoly([lc])
    for a in roots_f:
        f = f * UniPoly([-a, 1])
    g = UniPoly([1])
    for b in roots_g:
        g = g * UniPoly([-b, 1])
    expected = Fraction(lc) ** g.degree
    for a in roots_f:
        expected *= g(a)
    assert resultant(f, g) == expected
    assert (resultant(f, g) == 0) == bool(set(roots_f) & set(roots_g))


def test_shared_root():
    assert resultant(UniPoly([-1, 0, 1]), UniPoly([-1, 1])) == 0


def test_by_hand_determinant():
    q = symbol("q")
    f = UniPoly([q, 1 - q])
    g = UniPoly([2 * q - 1, 1 - q])
    assert resultant(f, g) == -((1 - q) ** 2)


def test_shift_examples():
    assert UniPoly([0, 0, 1]).shift(-1) == UniPoly([1, -2, 1])
    assert UniPoly([7]).shift(-1) == UniPoly([7])
    q = symbol("q")
    one = q**0
    x_minus = UniPoly([-one, one])
    x2 = UniPoly([-2 * one, one])
    f = UniPoly([0 * q, 0 * q, one]) - UniPoly([q]) * x_minus * x_minus
    assert f.shift(-1) == x_minus * x_minus - UniPoly([q]) * x2 * x2


def test_determinant_small():
    assert determinant([[1, 2], [3, 4]]) == -2
    assert determinant([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24
    assert determinant([]) == 1


def test_sylvester_shape():
    m = sylvester_matrix(UniPoly([1, 2, 3]), UniPoly([4, 5]))
    assert len(m) == 3 and all(len(row) == 3 for row in m)


def test_zero_polynomial_rejected():
    with pytest.raises(DataError):
        resultant(UniPoly([0]), UniPoly([1, 1]))


def test_ring_mismatch_rejected():
    with pytest.raises(RingMismatchError):
        UniPoly([1, 1]) + UniPoly([symbol("q"), 1])
