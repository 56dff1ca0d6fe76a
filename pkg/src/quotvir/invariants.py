"""Closed-form generating series of virtual invariants of Quot schemes.

All series are in ``q`` with ``q^l`` recording the length ``l`` Quot scheme
of a surface ``S`` and a rank ``r`` locally free sheaf ``E``.  Exponents are
intersection numbers supplied through :class:`QuotSetup`; they may be
rationals or symbolic :class:`~quotvir.polynomial.IntersectionPolynomial`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Union

from .errors import DataError, MissingPairingError, PreconditionError
from .polynomial import DEFAULT_REGISTRY, IntersectionPolynomial, parse_scalar, symbol
from .resultant import UniPoly, resultant
from .series import (
    POLY,
    TruncatedSeries,
    series_compose,
    series_exp,
    series_pow,
    series_revert,
)

Value = Union[Fraction, IntersectionPolynomial]

#: Pairing names used by the constructors below.
K2 = "K2"
CHI_TOP = "chiTop"
TWIST = "c1EL.K"  # c1(E (x) L) . c1(S)
DET = "c1E.K"  # c1(E) . c1(S)


def _normalize(value) -> Value:
    if isinstance(value, IntersectionPolynomial):
        return value.constant_value() if value.is_constant() else value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return parse_scalar(value)


@dataclass(frozen=True)
class QuotSetup:
    """One evaluation instance: rank of ``E``, intersection numbers, order.

    ``pairings`` maps names such as ``K2``, ``chiTop``, ``c1E.K`` or
    ``c1EL.K`` to rationals or polynomials.  Strings are parsed.  Whether
    the numbers could come from an actual surface is not checked.
    """

    rank: int
    pairings: Mapping[str, Value] = field(default_factory=dict)
    order: int = 10
    tautological_ranks: tuple = ()

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise DataError(f"rank must be a positive integer, got {self.rank!r}")
        if self.order < 0:
            raise DataError("truncation order must be nonnegative")
        for f in self.tautological_ranks:
            if not isinstance(f, int) or f < 1:
                raise DataError(f"tautological ranks must be positive integers, got {f!r}")
        clean = {}
        for name, value in dict(self.pairings).items():
            DEFAULT_REGISTRY.check(name)
            clean[name] = _normalize(value)
        object.__setattr__(self, "pairings", clean)
        object.__setattr__(self, "tautological_ranks", tuple(self.tautological_ranks))

    def pairing(self, name: str) -> Value:
        try:
            return self.pairings[name]
        except KeyError:
            raise MissingPairingError(f"setup has no value for pairing {name!r}") from None

    def replace(self, **changes) -> "QuotSetup":
        data = {
            "rank": self.rank,
            "pairings": dict(self.pairings),
            "order": self.order,
            "tautological_ranks": self.tautological_ranks,
        }
        pairings = changes.pop("pairings", None)
        if pairings:
            data["pairings"].update(pairings)
        data.update(changes)
        return QuotSetup(**data)


def _one_minus(c, order: int) -> TruncatedSeries:
    return TruncatedSeries([1, -c], order)


def euler_product(order: int) -> TruncatedSeries:
    """``prod_{m>=1} 1/(1 - q^m)`` truncated at ``q^order``.

    Uses ``log = sum_n sigma(n)/n q^n`` with ``sigma`` the divisor sum.
    """
    log = [Fraction(0)] * (order + 1)
    for m in range(1, order + 1):
        for n in range(m, order + 1, m):
            log[n] += Fraction(m, n)
    return series_exp(TruncatedSeries(log, order))


def gottsche_series(rank: int, chi_top, order: int) -> TruncatedSeries:
    """Topological Euler characteristics: ``(prod 1/(1-q^m))^{r chi(S)}``.

    ``chi_top`` is the topological Euler characteristic of ``S`` and may be
    symbolic.
    """
    if order < 0:
        raise PreconditionError("truncation order must be nonnegative")
    exponent = _normalize(chi_top) * rank
    return series_pow(euler_product(order), exponent)


def _op_polynomial(rank: int) -> UniPoly:
    """``x^r - q (x - 1)^r`` with coefficients polynomial in ``q``."""
    q = symbol("q")
    coeffs = [IntersectionPolynomial() for _ in range(rank + 1)]
    coeffs[rank] = coeffs[rank] + 1
    # (x - 1)^r = sum_k C(r, k) (-1)^{r-k} x^k
    for k in range(rank + 1):
        coeffs[k] = coeffs[k] - q * (comb(rank, k) * (-1) ** (rank - k))
    return UniPoly(coeffs)


def _q_polynomial_to_series(p, order: int) -> TruncatedSeries:
    p = IntersectionPolynomial.coerce(p)
    if p.symbols() - {"q"}:
        raise DataError(f"expected a polynomial in q, got {p}")
    by_power = p.coefficients_in("q")
    coeffs = [Fraction(0)] * (order + 1)
    for e, c in by_power.items():
        if e <= order:
            coeffs[e] = c.constant_value()
    return TruncatedSeries(coeffs, order)


@lru_cache(maxsize=None)
def shift_product_resultant(rank: int) -> IntersectionPolynomial:
    """``Res_x(f(x), f(x - 1))`` for ``f = x^r - q(x-1)^r``, a polynomial in q."""
    f = _op_polynomial(rank)
    return IntersectionPolynomial.coerce(resultant(f, f.shift(-1)))


def pairwise_shift_product(rank: int, order: int) -> TruncatedSeries:
    """Series of ``prod_{i<j} (1 - (x_i - x_j)^2)`` over roots of ``x^r - q(x-1)^r``.

    No roots are extracted: the product equals
    ``prod_{i != j} (1 - x_i + x_j)``, which is ``+-(1-q)^{-2r}`` times the
    resultant of ``f(x)`` and ``f(x-1)``.  The sign is fixed by requiring
    constant term 1 (at ``q = 0`` every root is 0).
    """
    if rank < 1:
        raise PreconditionError("rank must be positive")
    res = _q_polynomial_to_series(shift_product_resultant(rank), order)
    series = res * _one_minus(1, order) ** (-2 * rank)
    sign = series[0]
    if sign not in (1, -1):
        raise AssertionError(f"unexpected constant term {sign} in shift product")
    return series * sign


@lru_cache(maxsize=None)
def chi_vir_base(rank: int, order: int) -> TruncatedSeries:
    """``(1-q)^{2r} (1 - 2^r q)^{-r} prod_{i<j}(1 - (x_i - x_j)^2)``."""
    one_minus_q = _one_minus(1, order)
    return (
        one_minus_q ** (2 * rank)
        * _one_minus(2**rank, order) ** (-rank)
        * pairwise_shift_product(rank, order)
    )


def chi_vir_series(setup: QuotSetup) -> TruncatedSeries:
    """Virtual Euler characteristics; depends on ``E`` only through its rank."""
    return series_pow(chi_vir_base(setup.rank, setup.order), setup.pairing(K2))


def euler_top_series(setup: QuotSetup) -> TruncatedSeries:
    """``sum q^l int e(L^[l])^r = (1-q)^{-m}`` with ``m = c1(E(x)L).c1(S)``."""
    m = setup.pairing(TWIST)
    return series_pow(_one_minus(1, setup.order), -m)


def segre_substitution(rank: int, order: int) -> TruncatedSeries:
    """The change of variable ``q = (-1)^{r+1} p (1+p)^r`` as a series in ``p``."""
    p = TruncatedSeries.variable(order)
    return p * (1 + p) ** rank * (-1) ** (rank + 1)


def segre_line_p_series(setup: QuotSetup) -> TruncatedSeries:
    """``(1+p)^a ((1+(r+1)p)/(1+p)^{r+1})^{K2}`` as a series in ``p``."""
    r, n = setup.rank, setup.order
    a, k2 = setup.pairing(TWIST), setup.pairing(K2)
    p = TruncatedSeries.variable(n)
    one_plus_p = 1 + p
    ratio = (1 + (r + 1) * p) * one_plus_p ** (-(r + 1))
    left, right = series_pow(one_plus_p, a), series_pow(ratio, k2)
    if left.ring != right.ring:
        left, right = left.to_poly(), right.to_poly()
    return left * right


def segre_line_series(setup: QuotSetup) -> TruncatedSeries:
    """Closed form of the line-bundle Segre series, re-expanded in ``q``.

    ``p`` is eliminated by reverting ``q = (-1)^{r+1} p (1+p)^r``.  See
    :func:`segre_integral_series` for the relation to the integrals
    ``int s(L^[l])`` themselves.
    """
    p_series = segre_line_p_series(setup)
    p_of_q = series_revert(segre_substitution(setup.rank, setup.order))
    if p_series.ring == POLY:
        p_of_q = p_of_q.to_poly()
    return series_compose(p_series, p_of_q)


def segre_integral_series(setup: QuotSetup) -> TruncatedSeries:
    """``sum_l q^l int_{[Quot^l]^vir} s(L^[l])``.

    Equal to :func:`segre_line_series` at ``-q``.  The sign is pinned by the
    length one projective bundle computation in :mod:`quotvir.chow`, which
    gives ``(-1)^r c1(E(x)L).c1(S)`` for every rank.
    """
    closed = segre_line_series(setup)
    return TruncatedSeries([c * (-1) ** l for l, c in enumerate(closed)], closed.order, closed.ring)


def curve_reduction_sign(length: int, curve_value):
    """Transfer a curve-side integral to the surface virtual class: ``(-1)^l``."""
    if length < 0:
        raise PreconditionError("length must be nonnegative")
    return curve_value if length % 2 == 0 else -curve_value


def hilb_virtual_series_r1(setup: QuotSetup, invariant: str = "chi_vir") -> TruncatedSeries:
    """Rank one (Hilbert scheme) specialization of ``chi_vir`` or ``euler_top``."""
    if setup.rank != 1:
        raise PreconditionError(f"rank one entry point called with rank {setup.rank}")
    if invariant == "chi_vir":
        return chi_vir_series(setup)
    if invariant == "euler_top":
        return euler_top_series(setup)
    raise DataError(f"unknown rank one invariant {invariant!r}")
