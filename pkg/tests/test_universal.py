from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quotvir.errors import (
    MissingExponentError,
    NotComputableError,
    PreconditionError,
    RankDeficientError,
    RecurrenceViolation,
    TwistInvarianceError,
)
from quotvir.invariants import K2, TWIST, QuotSetup, chi_vir_base, chi_vir_series, euler_top_series
from quotvir.series import TruncatedSeries
from quotvir.universal import (
    HomogeneousUniversalPolynomial,
    UniversalSeries,
    chi_vir_universal,
    collapse_universal_polynomial,
    eliminate_twist_exponent,
    euler_top_universal,
    gottsche_universal,
    multiplicativity_check,
    symmetry_check,
    universal_evaluate,
    universal_extract,
)
from quotvir.verification import propagate_recurrence

N = 8


def test_evaluate_zero_exponents():
    U = chi_vir_universal(2, N)
    assert universal_evaluate(U, {K2: 0}) == TruncatedSeries.one(N)


def test_evaluate_euler_top():
    U = euler_top_universal(N)
    for m in range(4):
        assert universal_evaluate(U, {TWIST: m, K2: 7}) == euler_top_series(QuotSetup(1, {TWIST: m}, N))


def test_evaluate_is_a_homomorphism():
    U = UniversalSeries({K2: chi_vir_base(2, N), TWIST: TruncatedSeries([1, -1], N) ** -1})
    a = universal_evaluate(U, {K2: 2, TWIST: 0})
    b = universal_evaluate(U, {K2: 0, TWIST: 3})
    assert universal_evaluate(U, {K2: 2, TWIST: 3}) == a * b


def test_missing_exponent():
    with pytest.raises(MissingExponentError):
        universal_evaluate(euler_top_universal(N), {TWIST: 1})


def test_factor_constant_term_validated():
    with pytest.raises(PreconditionError):
        UniversalSeries({K2: TruncatedSeries([2, 1], 3)})


def test_extract_euler_top():
    samples = [({TWIST: m, K2: k}, euler_top_series(QuotSetup(1, {TWIST: m}, N))) for m, k in ((0, 1), (1, 0), (2, 3))]
    U = universal_extract(samples)
    assert U[TWIST] == TruncatedSeries([1, -1], N) ** -1
    assert U[K2] == TruncatedSeries.one(N)


def test_extract_chi_vir_rank_two():
    samples = [({K2: k}, chi_vir_series(QuotSetup(2, {K2: k}, N))) for k in range(4)]
    U = universal_extract(samples)
    assert U[K2] == chi_vir_base(2, N)


def test_extract_rank_deficient():
    s = euler_top_series(QuotSetup(1, {TWIST: 1}, N))
    with pytest.raises(RankDeficientError) as info:
        universal_extract([({TWIST: 1, K2: 1}, s), ({TWIST: 1, K2: 1}, s)])
    assert set(info.value.symbols) & {TWIST, K2}


exps = st.integers(-3, 3)


@given(st.lists(st.tuples(exps, exps), min_size=2, max_size=4))
@settings(max_examples=30, deadline=None)
def test_extract_inverts_evaluate(points):
    U = UniversalSeries({K2: chi_vir_base(2, 5), TWIST: TruncatedSeries([1, -1], 5) ** -1})
    samples = [({K2: k, TWIST: m}, universal_evaluate(U, {K2: k, TWIST: m})) for k, m in points]
    try:
        V = universal_extract(samples)
    except RankDeficientError:
        return
    assert V[K2] == U[K2] and V[TWIST] == U[TWIST]


def test_eliminate_twist():
    U = UniversalSeries({"c1E.K": TruncatedSeries.one(N), K2: chi_vir_base(1, N)})
    assert eliminate_twist_exponent(U).symbols == (K2,)
    bad = UniversalSeries({"c1E.K": TruncatedSeries([1, 1], N), K2: chi_vir_base(1, N)})
    with pytest.raises(TwistInvarianceError) as info:
        eliminate_twist_exponent(bad)
    assert info.value.index == 1


@pytest.mark.parametrize("r", [1, 2, 3])
def test_chi_vir_twist_factor_is_trivial(r):
    samples = [
        ({"c1E.K": e, K2: k}, chi_vir_series(QuotSetup(r, {K2: k}, N)))
        for e, k in ((1, 0), (0, 1), (3, 2))
    ]
    U = eliminate_twist_exponent(universal_extract(samples), {"c1E.K": r})
    assert U[K2] == chi_vir_base(r, N)


def test_multiplicativity():
    U = euler_top_universal(N)
    assert multiplicativity_check(U, {TWIST: 2, K2: 0}, {TWIST: 3, K2: 0})
    assert multiplicativity_check(U, {TWIST: 2, K2: 1}, {})
    assert multiplicativity_check(chi_vir_universal(2, N), {K2: 1}, {K2: 1})
    assert gottsche_universal(1, N)["chiTop"][2] == 2


def test_collapse_degree_one():
    c, e, f, r = Fraction(3), Fraction(5), 2, 3
    P = HomogeneousUniversalPolynomial(1, {(1, 0, 0): c, (0, 1, 0): c * f / r, (0, 0, 1): e}, f, r)
    assert collapse_universal_polynomial(P) == [e, c / r]


def test_collapse_zero():
    assert collapse_universal_polynomial(HomogeneousUniversalPolynomial(3, {}, 2, 2)) == [0] * 4


@pytest.mark.parametrize("d,f,r", [(2, 1, 2), (3, 2, 3), (4, 3, 1)])
def test_collapse_recovers_seeds(d, f, r):
    seeds = {i: Fraction(i * i + 1, i + 2) for i in range(d + 1)}
    table = propagate_recurrence(seeds, d, f, r)
    got = collapse_universal_polynomial(HomogeneousUniversalPolynomial(d, table, f, r))
    assert got == [seeds[i] / r**i for i in range(d + 1)]


def test_collapse_violation():
    P = HomogeneousUniversalPolynomial(1, {(1, 0, 0): 1, (0, 1, 0): 7}, 1, 1)
    with pytest.raises(RecurrenceViolation) as info:
        collapse_universal_polynomial(P)
    assert info.value.triple == (0, 1, 0)


def test_symmetry():
    pair = {"c1E.K": 2, "c1F.K": -1, K2: 3}
    assert symmetry_check(1, 1, pair)
    assert symmetry_check(2, 2, pair)
    with pytest.raises(NotComputableError):
        symmetry_check(2, 3, pair)
