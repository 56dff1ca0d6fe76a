"""Univariate polynomials over a commutative ring, and Sylvester resultants.

Sign convention: the Sylvester matrix of ``f`` (degree n) and ``g``
(degree m) has the m shifted coefficient rows of ``f`` on top and the n rows
of ``g`` below, coefficients in descending powers.  With this convention

    Res(f, g) = lc(f)^m * prod_{f(x_i)=0} g(x_i),

so ``Res(x - a, x - b) = a - b``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import DataError, RingMismatchError
from .polynomial import IntersectionPolynomial


def _kind(c):
    return IntersectionPolynomial if isinstance(c, IntersectionPolynomial) else Fraction


class UniPoly:
    """Dense polynomial in ``x``; ``coefficients[i]`` multiplies ``x^i``.

    Trailing zero coefficients are stripped, so ``degree`` is exact.  The
    zero polynomial has degree -1.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence):
        coeffs = [c if isinstance(c, IntersectionPolynomial) else Fraction(c) for c in coefficients]
        if any(isinstance(c, IntersectionPolynomial) for c in coeffs):
            coeffs = [IntersectionPolynomial.coerce(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading_coefficient(self):
        if not self.coefficients:
            raise DataError("zero polynomial has no leading coefficient")
        return self.coefficients[-1]

    def is_zero(self) -> bool:
        return not self.coefficients

    def _zero(self):
        if self.coefficients and isinstance(self.coefficients[0], IntersectionPolynomial):
            return IntersectionPolynomial()
        return Fraction(0)

    def _check(self, other: "UniPoly") -> None:
        kinds = {_kind(c) for c in self.coefficients + other.coefficients}
        if len(kinds) > 1:
            raise RingMismatchError("polynomials over different coefficient rings")

    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        n = max(len(self.coefficients), len(other.coefficients))
        a = list(self.coefficients) + [0] * (n - len(self.coefficients))
        b = list(other.coefficients) + [0] * (n - len(other.coefficients))
        return UniPoly([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coefficients])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coefficients])
        self._check(other)
        if self.is_zero() or other.is_zero():
            return UniPoly([])
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    __hash__ = None

    def __call__(self, x):
        total = 0
        for c in reversed(self.coefficients):
            total = total * x + c
        return total

    def shift(self, c=-1) -> "UniPoly":
        """``f(x + c)``, expanded binomially; ``shift()`` is ``x -> x - 1``."""
        out = [0] * len(self.coefficients)
        for i, a in enumerate(self.coefficients):
            for k in range(i + 1):
                out[k] = out[k] + a * comb(i, k) * Fraction(c) ** (i - k)
        return UniPoly(out)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coefficients]})"


def sylvester_matrix(f: UniPoly, g: UniPoly) -> list[list]:
    n, m = f.degree, g.degree
    size = n + m
    zero = f._zero()
    fc = list(reversed(f.coefficients))
    gc = list(reversed(g.coefficients))
    rows = []
    for i in range(m):
        rows.append([zero] * i + fc + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + gc + [zero] * (size - m - 1 - i))
    return rows


def determinant(matrix: Sequence[Sequence]):
    """Division-free determinant over any commutative ring.

    Laplace expansion along rows, memoized on the set of remaining columns:
    O(n 2^n) ring operations, exact for polynomial entries.
    """
    n = len(matrix)
    if n == 0:
        return 1
    memo: dict[int, object] = {}

    def minor(row: int, cols: int):
        # cols: bitmask of columns still available for rows row..n-1
        if row == n:
            return 1
        if cols in memo:
            return memo[cols]
        total = 0
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = matrix[row][c]
            if entry:
                term = entry * minor(row + 1, cols & ~(1 << c))
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[cols] = total
        return total

    return minor(0, (1 << n) - 1)


def resultant(f: UniPoly, g: UniPoly):
    """Sylvester resultant; see the module docstring for the sign."""
    if f.is_zero() or g.is_zero():
        raise DataError("resultant of the zero polynomial")
    f._check(g)
    if f.degree == 0 and g.degree == 0:
        return 1
    return determinant(sylvester_matrix(f, g))
