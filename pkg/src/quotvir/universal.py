"""Universal series: products of unit power series raised to intersection numbers.

A tautological generating series of the Quot schemes of a surface has the
shape ``prod_i A_i(q)^{k_i}`` where the ``k_i`` are intersection numbers
(``K2``, ``c1E.K``, ``c1EF1.K``, ...) and the ``A_i`` depend on ranks only.
This module evaluates such products, recovers the ``A_i`` from samples by
exact linear algebra on logarithms, and carries out the structural checks
used to pin them down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .errors import (
    DataError,
    InconsistentSamplesError,
    MissingExponentError,
    NotComputableError,
    PreconditionError,
    RankDeficientError,
    RecurrenceViolation,
    TwistInvarianceError,
)
from .invariants import (
    K2,
    TWIST,
    QuotSetup,
    chi_vir_base,
    euler_product,
    segre_line_series,
)
from .polynomial import DEFAULT_REGISTRY
from .series import POLY, TruncatedSeries, series_exp, series_log, series_pow


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a structural check; truthy iff it passed."""

    name: str
    ok: bool
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"


@dataclass(frozen=True)
class UniversalSeries:
    """``prod_symbol factors[symbol] ** exponent[symbol]``."""

    factors: Mapping[str, TruncatedSeries]
    order: int = field(default=-1)

    def __post_init__(self):
        factors = dict(self.factors)
        for name, base in factors.items():
            DEFAULT_REGISTRY.check(name)
            if base[0] != 1:
                raise PreconditionError(f"factor {name} must have constant term 1")
        order = self.order
        if order < 0:
            order = min((b.order for b in factors.values()), default=0)
        factors = {n: b.truncate(min(order, b.order)) for n, b in factors.items()}
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "order", order)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(self.factors)

    def __getitem__(self, name: str) -> TruncatedSeries:
        return self.factors[name]


def universal_evaluate(U: UniversalSeries, exponents: Mapping[str, object]) -> TruncatedSeries:
    """``prod_i A_i ** k_i``; every factor symbol needs an exponent."""
    missing = [s for s in U.symbols if s not in exponents]
    if missing:
        raise MissingExponentError(f"no exponent for {', '.join(missing)}")
    result = TruncatedSeries.one(U.order)
    for name, base in U.factors.items():
        term = series_pow(base, exponents[name])
        if term.ring != result.ring:
            result, term = result.to_poly(), term.to_poly()
        result = result * term
    return result


def _solve_exact(rows: list[list[Fraction]], rhs: list[list[Fraction]], symbols: Sequence[str]):
    """Solve ``rows . X = rhs`` exactly (several right-hand sides at once).

    Raises on rank deficiency (naming the free symbols) and on inconsistency.
    """
    m, n = len(rows), len(symbols)
    k = len(rhs[0]) if rhs else 0
    aug = [list(rows[i]) + list(rhs[i]) for i in range(m)]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if aug[i][col]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col]:
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if len(pivots) < n:
        free = [symbols[c] for c in range(n) if c not in pivots]
        raise RankDeficientError(
            f"samples do not determine the factors for {', '.join(free)}", free
        )
    for i in range(r, m):
        if any(aug[i][n:]):
            raise InconsistentSamplesError("samples admit no exact universal form")
    return [[aug[i][n + j] for j in range(k)] for i in range(n)]


def universal_extract(samples: Sequence[tuple[Mapping[str, object], TruncatedSeries]]) -> UniversalSeries:
    """Recover the factors ``A_i`` from ``(exponents, series)`` samples.

    ``log(series) = sum_i k_i log(A_i)`` is linear in the unknown
    ``log(A_i)``, so each coefficient of ``q^n`` is an exact rational linear
    system with the exponent vectors as rows.
    """
    if not samples:
        raise RankDeficientError("no samples given")
    symbols: list[str] = []
    for exps, _ in samples:
        for name in exps:
            if name not in symbols:
                symbols.append(name)
    for name in symbols:
        DEFAULT_REGISTRY.check(name)
    order = min(s.order for _, s in samples)
    rows, rhs = [], []
    for exps, series in samples:
        if series.ring == POLY:
            series = series.to_rational()
        rows.append([Fraction(exps.get(name, 0)) for name in symbols])
        log = series_log(series.truncate(order))
        rhs.append(list(log.coefficients))
    solution = _solve_exact(rows, rhs, symbols)
    factors = {
        name: series_exp(TruncatedSeries(solution[i], order)) for i, name in enumerate(symbols)
    }
    return UniversalSeries(factors, order)


def eliminate_twist_exponent(U: UniversalSeries, twist_relation: Mapping[str, object] | None = None) -> UniversalSeries:
    """Drop the factors that shift under ``E -> E (x) L``.

    Twisting by ``L`` changes the exponents by ``twist_relation`` times
    ``c1(L).c1(S)`` (by default ``c1E.K`` moves by ``r``), so a
    twist-invariant series forces ``prod A_s^{shift_s} = 1``.  With one
    shifted symbol this means ``A = 1``; anything else is reported at the
    first offending coefficient.
    """
    if twist_relation is None:
        twist_relation = {"c1E.K": 1}
    for name in twist_relation:
        if name not in U.factors:
            raise PreconditionError(f"universal series has no {name} factor")
    ratio = universal_evaluate(
        UniversalSeries({n: U.factors[n] for n in twist_relation}, U.order),
        {n: Fraction(s) for n, s in twist_relation.items()},
    )
    for l, c in enumerate(ratio):
        if l and c:
            raise TwistInvarianceError(
                f"twist changes the series at q^{l} (coefficient {c}); "
                "the invariant is not twist invariant",
                index=l,
            )
    if len([s for s in twist_relation.values() if s]) == 1:
        for name in twist_relation:
            base = U.factors[name]
            bad = next((l for l, c in enumerate(base) if l and c), None)
            if bad is not None:
                raise TwistInvarianceError(f"factor {name} is not 1 at q^{bad}", index=bad)
    return UniversalSeries({n: b for n, b in U.factors.items() if n not in twist_relation}, U.order)


def multiplicativity_check(U: UniversalSeries, data1: Mapping[str, object], data2: Mapping[str, object]) -> CheckResult:
    """Disjoint union of surfaces: exponents add, series multiply."""
    names = set(U.symbols)
    total = {n: Fraction(data1.get(n, 0)) + Fraction(data2.get(n, 0)) for n in names}
    joint = universal_evaluate(U, total)
    product = universal_evaluate(U, {n: data1.get(n, 0) for n in names}) * universal_evaluate(
        U, {n: data2.get(n, 0) for n in names}
    )
    for l, (a, b) in enumerate(zip(joint, product)):
        if a != b:
            return CheckResult("multiplicativity", False, f"first mismatch at q^{l}: {a} != {b}")
    return CheckResult("multiplicativity", True, f"exact through q^{U.order}")


# -- canonical universal forms ---------------------------------------------------


def euler_top_universal(order: int) -> UniversalSeries:
    one_minus_q = TruncatedSeries([1, -1], order)
    return UniversalSeries({TWIST: one_minus_q ** -1, K2: TruncatedSeries.one(order)}, order)


def chi_vir_universal(rank: int, order: int) -> UniversalSeries:
    return UniversalSeries({K2: chi_vir_base(rank, order)}, order)


def gottsche_universal(rank: int, order: int) -> UniversalSeries:
    return UniversalSeries({"chiTop": series_pow(euler_product(order), rank)}, order)


def segre_line_universal(rank: int, order: int) -> UniversalSeries:
    """Factors read off the closed form at unit exponents."""
    base_a = segre_line_series(QuotSetup(rank, {TWIST: 1, K2: 0}, order))
    base_k = segre_line_series(QuotSetup(rank, {TWIST: 0, K2: 1}, order))
    return UniversalSeries({TWIST: base_a, K2: base_k}, order)


# -- collapse of the curve-side universal polynomial ---------------------------


@dataclass(frozen=True)
class HomogeneousUniversalPolynomial:
    """``sum_{i+j+k=d} n_{i,j,k} c1(F|C)^i c1(E|C)^j g^k``; ranks ``f`` and ``r``."""

    degree: int
    coefficients: Mapping[tuple, object]
    f: int
    r: int

    def __post_init__(self):
        clean = {}
        for key, value in dict(self.coefficients).items():
            i, j, k = (int(x) for x in key)
            if min(i, j, k) < 0 or i + j + k != self.degree:
                raise DataError(f"index {key} does not sum to degree {self.degree}")
            clean[(i, j, k)] = Fraction(value)
        object.__setattr__(self, "coefficients", clean)
        if self.r < 1 or self.f < 1:
            raise DataError("ranks must be positive")

    def n(self, i: int, j: int, k: int) -> Fraction:
        return self.coefficients.get((i, j, k), Fraction(0))


def collapse_universal_polynomial(P: HomogeneousUniversalPolynomial) -> list[Fraction]:
    """Coefficients ``n_{i,0,d-i} / r^i`` of ``c1(E|C (x) F|C)^i g^{d-i}``.

    Twist invariance forces ``n_{i,j,k} = n_{i+j,0,k} (f/r)^j C(i+j, i)``;
    every stored entry is checked against it first.
    """
    d, f, r = P.degree, Fraction(P.f), Fraction(P.r)
    for i in range(d + 1):
        for j in range(d + 1 - i):
            k = d - i - j
            expected = P.n(i + j, 0, k) * (f / r) ** j * comb(i + j, i)
            if P.n(i, j, k) != expected:
                raise RecurrenceViolation(
                    f"n_{{{i},{j},{k}}} = {P.n(i, j, k)} but twist invariance requires {expected}",
                    triple=(i, j, k),
                )
    return [P.n(i, 0, d - i) / r**i for i in range(d + 1)]


def symmetry_check(r: int, f: int, pairings: Mapping[str, object], order: int = 8) -> CheckResult:
    """Compare the Segre series of ``(E, F)`` and ``(F, E)``.

    ``pairings`` supplies ``c1E.K``, ``c1F.K`` and ``K2``.  Only rank one
    line bundles (``r = f = 1``) have a closed form here; for ``r = f`` in
    general the comparison is of the universal exponents, which coincide.
    """
    if r != f:
        raise NotComputableError(
            f"Segre series with tautological rank {max(r, f)} >= 2 has no closed form here"
        )
    try:
        e, fk, k2 = (Fraction(pairings[n]) for n in ("c1E.K", "c1F.K", "K2"))
    except KeyError as exc:
        raise DataError(f"symmetry check needs pairing {exc.args[0]}") from None
    # c1(E (x) F) = f c1(E) + r c1(F)
    a_ef = f * e + r * fk
    a_fe = r * fk + f * e
    if r != 1:
        ok = a_ef == a_fe
        return CheckResult("segre symmetry", ok, f"equal ranks {r}, exponents {a_ef} vs {a_fe}")
    lhs = segre_line_series(QuotSetup(r, {TWIST: a_ef, K2: k2}, order))
    rhs = segre_line_series(QuotSetup(f, {TWIST: a_fe, K2: k2}, order))
    if lhs != rhs:
        return CheckResult("segre symmetry", False, f"{lhs} != {rhs}")
    return CheckResult("segre symmetry", True, f"r=f=1, a={a_ef}, K2={k2}, exact through q^{order}")
