"""Truncated power series in one variable with exact coefficients.

A :class:`TruncatedSeries` holds the coefficients of ``q^0 .. q^N``.  The
coefficient ring is either the rationals (``QQ``) or
:class:`~quotvir.polynomial.IntersectionPolynomial` (``POLY``).  Binary
operations between series demand the same ring and truncate to the smaller
order; nothing ever extends precision.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import NonUnitError, PreconditionError, RingMismatchError
from .polynomial import IntersectionPolynomial

QQ = "QQ"
POLY = "POLY"

Coefficient = Union[Fraction, IntersectionPolynomial]


def _ring_of(value) -> str:
    return POLY if isinstance(value, IntersectionPolynomial) else QQ


def _to_ring(value, ring: str):
    if ring == POLY:
        return IntersectionPolynomial.coerce(value)
    if isinstance(value, IntersectionPolynomial):
        return value.constant_value()
    return Fraction(value)


def _zero(ring: str):
    return IntersectionPolynomial() if ring == POLY else Fraction(0)


def _one(ring: str):
    return IntersectionPolynomial.constant(1) if ring == POLY else Fraction(1)


class TruncatedSeries:
    """Immutable power series known up to and including ``q^N``."""

    __slots__ = ("_coeffs", "_ring")

    def __init__(self, coefficients: Iterable, order: int | None = None, ring: str | None = None):
        coeffs = list(coefficients)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise PreconditionError("truncation order must be nonnegative")
        if ring is None:
            ring = POLY if any(isinstance(c, IntersectionPolynomial) for c in coeffs) else QQ
        coeffs = coeffs[: order + 1]
        coeffs += [0] * (order + 1 - len(coeffs))
        self._ring = ring
        self._coeffs = tuple(_to_ring(c, ring) for c in coeffs)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def one(cls, order: int, ring: str = QQ) -> "TruncatedSeries":
        return cls([1], order, ring)

    @classmethod
    def zero(cls, order: int, ring: str = QQ) -> "TruncatedSeries":
        return cls([], order, ring)

    @classmethod
    def variable(cls, order: int, ring: str = QQ) -> "TruncatedSeries":
        """The series ``q``."""
        return cls([0, 1], order, ring)

    @classmethod
    def monomial(cls, power: int, order: int, coefficient=1, ring: str | None = None) -> "TruncatedSeries":
        return cls([0] * power + [coefficient], order, ring)

    # -- inspection -----------------------------------------------------------

    @property
    def order(self) -> int:
        """Truncation order ``N``."""
        return len(self._coeffs) - 1

    truncation_order = order

    @property
    def ring(self) -> str:
        return self._ring

    @property
    def coefficients(self) -> tuple:
        return self._coeffs

    def __getitem__(self, index):
        return self._coeffs[index]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def valuation(self) -> int | None:
        for i, c in enumerate(self._coeffs):
            if c:
                return i
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise PreconditionError("truncate cannot extend precision")
        return TruncatedSeries(self._coeffs[: order + 1], order, self._ring)

    def to_poly(self) -> "TruncatedSeries":
        """Same series over the polynomial ring."""
        return TruncatedSeries(self._coeffs, self.order, POLY)

    def to_rational(self) -> "TruncatedSeries":
        """Same series over QQ; fails if a coefficient is not constant."""
        return TruncatedSeries(self._coeffs, self.order, QQ)

    def substitute(self, values) -> "TruncatedSeries":
        """Evaluate symbols in every coefficient (POLY series only)."""
        if self._ring != POLY:
            return self
        coeffs = [c.substitute(values) for c in self._coeffs]
        if all(c.is_constant() for c in coeffs):
            return TruncatedSeries([c.constant_value() for c in coeffs], self.order, QQ)
        return TruncatedSeries(coeffs, self.order, POLY)

    def evaluate(self, x) -> object:
        """Sum of the truncated polynomial at a numeric point (float or Fraction)."""
        total = 0
        for c in reversed(self._coeffs):
            c = c.constant_value() if isinstance(c, IntersectionPolynomial) else c
            total = total * x + (float(c) if isinstance(x, float) else c)
        return total

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            return all(a == b for a, b in zip(self._coeffs[: n + 1], other._coeffs[: n + 1]))
        if isinstance(other, (int, Fraction, IntersectionPolynomial)):
            return self == TruncatedSeries([other], self.order)
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self._coeffs)
        return f"TruncatedSeries([{body}], order={self.order})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self._coeffs):
            if not c:
                continue
            cs = str(c)
            if isinstance(c, IntersectionPolynomial) and len(c.terms) > 1:
                cs = f"({cs})"
            terms.append(cs if i == 0 else f"{cs}*q^{i}")
        return (" + ".join(terms) or "0") + f" + O(q^{self.order + 1})"

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self._ring != other._ring:
            raise RingMismatchError(f"coefficient rings differ: {self._ring} vs {other._ring}")

    def _scalar_ring(self, c) -> str:
        return POLY if POLY in (self._ring, _ring_of(c)) else QQ

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_add(self, other)
        if isinstance(other, (int, Fraction, IntersectionPolynomial)):
            ring = self._scalar_ring(other)
            coeffs = list(self._coeffs)
            coeffs[0] = coeffs[0] + other
            return TruncatedSeries(coeffs, self.order, ring)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self._coeffs], self.order, self._ring)

    def __sub__(self, other):
        if isinstance(other, (TruncatedSeries, int, Fraction, IntersectionPolynomial)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction, IntersectionPolynomial)):
            ring = self._scalar_ring(other)
            return TruncatedSeries([c * other for c in self._coeffs], self.order, ring)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, series_invert(other))
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([c / other for c in self._coeffs], self.order, self._ring)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return series_invert(self) * other
        return NotImplemented

    def __pow__(self, exponent):
        if isinstance(exponent, int):
            if exponent < 0:
                return _int_power(series_invert(self), -exponent)
            return _int_power(self, exponent)
        return series_pow(self, exponent)

    def __call__(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        return series_compose(self, inner)


def _int_power(base: TruncatedSeries, n: int) -> TruncatedSeries:
    result = TruncatedSeries.one(base.order, base.ring)
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._check(b)
    n = min(a.order, b.order)
    return TruncatedSeries([x + y for x, y in zip(a[: n + 1], b[: n + 1])], n, a.ring)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller order."""
    a._check(b)
    n = min(a.order, b.order)
    ac, bc = a.coefficients, b.coefficients
    out = []
    for k in range(n + 1):
        total = _zero(a.ring)
        for i in range(k + 1):
            x = ac[i]
            if x:
                y = bc[k - i]
                if y:
                    total = total + x * y
        out.append(total)
    return TruncatedSeries(out, n, a.ring)


def _unit_inverse(c, ring: str):
    if ring == POLY:
        if not c.is_constant() or not c:
            raise NonUnitError(f"constant term {c} is not a unit")
        return IntersectionPolynomial.constant(1 / c.constant_value())
    if not c:
        raise NonUnitError("constant term 0 is not a unit")
    return 1 / c


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; the constant term must be a unit."""
    inv0 = _unit_inverse(a[0], a.ring)
    out = [inv0]
    for k in range(1, a.order + 1):
        total = _zero(a.ring)
        for i in range(1, k + 1):
            if a[i]:
                total = total + a[i] * out[k - i]
        out.append(-total * inv0)
    return TruncatedSeries(out, a.order, a.ring)


def derivative(a: TruncatedSeries) -> TruncatedSeries:
    """Formal derivative; loses one order of precision."""
    if a.order == 0:
        return TruncatedSeries.zero(0, a.ring)
    return TruncatedSeries([k * a[k] for k in range(1, a.order + 1)], a.order - 1, a.ring)


def integral(a: TruncatedSeries) -> TruncatedSeries:
    """Antiderivative with zero constant term; gains one order."""
    return TruncatedSeries([0] + [a[k] / (k + 1) for k in range(a.order + 1)], a.order + 1, a.ring)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """``log(a)`` for ``a`` with constant term 1."""
    if a[0] != 1:
        raise PreconditionError(f"log needs constant term 1, got {a[0]}")
    if a.order == 0:
        return TruncatedSeries.zero(0, a.ring)
    return integral(series_mul(derivative(a), series_invert(a.truncate(a.order - 1))))


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """``exp(a)`` for ``a`` with constant term 0."""
    if a[0] != 0:
        raise PreconditionError(f"exp needs constant term 0, got {a[0]}")
    # n b_n = sum_{k=1}^n k a_k b_{n-k}
    out = [_one(a.ring)]
    for n in range(1, a.order + 1):
        total = _zero(a.ring)
        for k in range(1, n + 1):
            if a[k]:
                total = total + k * a[k] * out[n - k]
        out.append(total / n)
    return TruncatedSeries(out, a.order, a.ring)


def series_pow(base: TruncatedSeries, exponent) -> TruncatedSeries:
    """``base ** exponent`` as ``exp(exponent * log(base))``.

    The exponent may be an int, a Fraction, or an
    :class:`IntersectionPolynomial`; a symbolic exponent gives a series over
    the polynomial ring.
    """
    if base[0] != 1:
        raise PreconditionError(f"power needs constant term 1, got {base[0]}")
    if isinstance(exponent, str):
        exponent = IntersectionPolynomial.parse(exponent)
    if isinstance(exponent, IntersectionPolynomial):
        if exponent.is_constant():
            exponent = exponent.constant_value()
        elif base.ring != POLY:
            base = base.to_poly()
    log = series_log(base)
    return series_exp(log * exponent)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """``outer(inner(q))``; ``inner`` must have zero constant term."""
    if inner[0] != 0:
        raise PreconditionError("composition needs an inner series with zero constant term")
    outer._check(inner)
    n = min(outer.order, inner.order)
    inner = inner.truncate(n)
    result = TruncatedSeries([outer[n]], n, outer.ring)
    for k in range(n - 1, -1, -1):
        result = result * inner + outer[k]
    return result


def series_revert(s: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse by Lagrange inversion.

    ``[q^n] s^{-1} = (1/n) [x^{n-1}] (x / s(x))^n``.
    """
    if s.order < 1 or s[0] != 0:
        raise PreconditionError("reversion needs s(0) = 0 and order >= 1")
    try:
        _unit_inverse(s[1], s.ring)
    except NonUnitError:
        raise PreconditionError(f"reversion needs a unit q^1 coefficient, got {s[1]}") from None
    n_max = s.order
    # x / s(x) = 1 / (s_1 + s_2 x + ...)
    h = series_invert(TruncatedSeries(s[1:], n_max - 1, s.ring))
    out = [_zero(s.ring)]
    power = TruncatedSeries.one(n_max - 1, s.ring)
    for n in range(1, n_max + 1):
        power = power * h
        out.append(power[n - 1] / n)
    return TruncatedSeries(out, n_max, s.ring)
