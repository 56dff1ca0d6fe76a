from fractions import Fraction
from math import comb

import pytest

from quotvir.errors import DataError, MissingPairingError, PreconditionError, UnknownSymbolError
from quotvir.invariants import (
    K2,
    TWIST,
    QuotSetup,
    chi_vir_series,
    curve_reduction_sign,
    euler_product,
    euler_top_series,
    gottsche_series,
    hilb_virtual_series_r1,
    pairwise_shift_product,
    segre_integral_series,
    segre_line_series,
    segre_substitution,
)
from quotvir.polynomial import symbol
from quotvir.series import TruncatedSeries, series_compose, series_revert
from quotvir.verification import partition_numbers, root_product


def test_setup_validation():
    with pytest.raises(DataError):
        QuotSetup(0)
    with pytest.raises(UnknownSymbolError):
        QuotSetup(1, {"nonsense": 1})
    s = QuotSetup(2, {"K2": "3/2"})
    assert s.pairing(K2) == Fraction(3, 2)
    with pytest.raises(MissingPairingError):
        s.pairing(TWIST)
    assert s.replace(order=3, pairings={TWIST: 1}).pairings == {K2: Fraction(3, 2), TWIST: 1}


def test_euler_product_is_partition_numbers():
    assert list(euler_product(30)) == partition_numbers(30)


def test_gottsche_examples():
    assert gottsche_series(1, 0, 8) == TruncatedSeries.one(8)
    assert list(gottsche_series(1, 1, 6)) == [1, 1, 2, 3, 5, 7, 11]
    assert gottsche_series(2, 1, 10) == gottsche_series(1, 2, 10)


def test_gottsche_symbolic_chi():
    chi = symbol("chiTop")
    s = gottsche_series(1, chi, 3)
    for value in range(4):
        assert s.substitute({"chiTop": value}) == gottsche_series(1, value, 3)


def test_shift_product_rank_one_and_two():
    assert pairwise_shift_product(1, 10) == TruncatedSeries.one(10)
    q = TruncatedSeries.variable(10)
    one_minus_q = 1 - q
    assert pairwise_shift_product(2, 10) == 1 - 4 * q * one_minus_q ** -2


@pytest.mark.parametrize("rank", [2, 3, 4])
def test_shift_product_numeric(rank):
    q = 0.01
    series = pairwise_shift_product(rank, 40)
    value = sum(float(c) * q**l for l, c in enumerate(series))
    assert abs(value - root_product(rank, q)) < 1e-9


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_shift_product_constant_term(rank):
    assert pairwise_shift_product(rank, 4)[0] == 1


def test_chi_vir_examples():
    assert chi_vir_series(QuotSetup(3, {K2: 0}, 6)) == TruncatedSeries.one(6)
    assert list(chi_vir_series(QuotSetup(1, {K2: 1}, 4))) == [1, 0, 1, 2, 4]
    assert list(chi_vir_series(QuotSetup(2, {K2: 1}, 3))) == [1, 0, -2, -24]


def test_chi_vir_rank_two_closed_form():
    q = TruncatedSeries.variable(12)
    base = (1 - q) ** 2 * (1 - 6 * q + q * q) * (1 - 4 * q) ** -2
    assert chi_vir_series(QuotSetup(2, {K2: 1}, 12)) == base


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_chi_vir_has_no_linear_term(rank):
    assert chi_vir_series(QuotSetup(rank, {K2: 5}, 3))[1] == 0


def test_chi_vir_independent_of_determinant():
    a = chi_vir_series(QuotSetup(2, {K2: 2, "c1E.K": 0}, 6))
    b = chi_vir_series(QuotSetup(2, {K2: 2, "c1E.K": 7}, 6))
    assert a == b


def test_euler_top_examples():
    assert euler_top_series(QuotSetup(1, {TWIST: 0}, 6)) == TruncatedSeries.one(6)
    assert euler_top_series(QuotSetup(2, {TWIST: 2}, 5))[3] == 4
    m = symbol("m")
    s = euler_top_series(QuotSetup(1, {TWIST: m}, 3))
    assert s[2] == m * (m + 1) / 2


@pytest.mark.parametrize("m", range(6))
def test_euler_top_binomials(m):
    s = euler_top_series(QuotSetup(1, {TWIST: m}, 10))
    assert list(s) == [comb(m + l - 1, l) if m else int(l == 0) for l in range(11)]


def test_euler_top_negative_m():
    s = euler_top_series(QuotSetup(1, {TWIST: -2}, 4))
    assert list(s) == [1, -2, 1, 0, 0]


def test_segre_examples():
    for r in (1, 2, 3):
        s = segre_line_series(QuotSetup(r, {TWIST: 3, K2: 2}, 6))
        assert s[0] == 1
        assert segre_line_series(QuotSetup(r, {TWIST: 0, K2: 0}, 6)) == TruncatedSeries.one(6)
    a = symbol("a")
    s = segre_line_series(QuotSetup(1, {TWIST: a, K2: symbol("K2")}, 3))
    assert s[1] == a


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_segre_substitution_roundtrip(rank):
    s = segre_substitution(rank, 12)
    p = TruncatedSeries.variable(12)
    assert series_compose(series_revert(s), s) == p


def test_segre_integral_is_closed_form_at_minus_q():
    setup = QuotSetup(2, {TWIST: 3, K2: 1}, 6)
    closed, integral = segre_line_series(setup), segre_integral_series(setup)
    assert [c * (-1) ** l for l, c in enumerate(closed)] == list(integral)


def test_segre_closed_form_first_coefficient_sign():
    a = symbol("a")
    for r in (1, 2, 3, 4):
        s = segre_line_series(QuotSetup(r, {TWIST: a, K2: 0}, 2))
        assert s[1] == (-1) ** (r + 1) * a


def test_curve_reduction_sign():
    assert curve_reduction_sign(0, 5) == 5
    assert curve_reduction_sign(1, 5) == -5
    assert curve_reduction_sign(3, 7) == -7
    with pytest.raises(PreconditionError):
        curve_reduction_sign(-1, 1)


def test_hilb_r1():
    L = symbol("c1L.K")
    s = hilb_virtual_series_r1(QuotSetup(1, {TWIST: L}, 3), "euler_top")
    assert s[1] == L
    assert hilb_virtual_series_r1(QuotSetup(1, {K2: 4}, 3))[1] == 0
    zero = hilb_virtual_series_r1(QuotSetup(1, {TWIST: 0}, 5), "euler_top")
    assert list(zero)[1:] == [0] * 5


def test_hilb_r1_rejects_higher_rank():
    with pytest.raises(PreconditionError):
        hilb_virtual_series_r1(QuotSetup(2, {K2: 1}, 3))
