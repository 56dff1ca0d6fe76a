"""End-to-end acceptance checks, each against an independent oracle.

Every ``criterion_*`` function returns a :class:`CheckResult`.  The oracles
here deliberately avoid the code paths they check: partition numbers come
from multiplying out the finite product, rational series from binomial
expansions, the pairwise root product from floating point roots, and so on.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from math import comb, factorial
from typing import Callable

import numpy as np

from .chow import Bundle, ProjectiveBundle, parse_integrand, verify_rank_reduction_l1
from .invariants import (
    K2,
    TWIST,
    QuotSetup,
    chi_vir_base,
    chi_vir_series,
    euler_top_series,
    gottsche_series,
    pairwise_shift_product,
    segre_integral_series,
    segre_line_series,
    segre_substitution,
)
from .polynomial import IntersectionPolynomial, symbol
from .series import TruncatedSeries, series_compose, series_revert
from .universal import (
    CheckResult,
    HomogeneousUniversalPolynomial,
    UniversalSeries,
    chi_vir_universal,
    collapse_universal_polynomial,
    eliminate_twist_exponent,
    euler_top_universal,
    gottsche_universal,
    multiplicativity_check,
    segre_line_universal,
    symmetry_check,
    universal_evaluate,
    universal_extract,
)

# -- plain integer/rational polynomial helpers used by the oracles -------------


def _pmul(a: list, b: list, n: int) -> list:
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def _binomial_series(c, power: int, n: int) -> list:
    """Coefficients of ``(1 - c q)^power`` for integer ``power`` by binomials."""
    if power >= 0:
        return [comb(power, k) * (-c) ** k if k <= power else 0 for k in range(n + 1)]
    m = -power
    return [comb(m + k - 1, k) * c**k for k in range(n + 1)]


# -- oracles ---------------------------------------------------------------------


def partition_numbers(n: int) -> list[int]:
    """``prod_{m=1}^{n} sum_k q^{mk}`` multiplied out."""
    coeffs = [1] + [0] * n
    for m in range(1, n + 1):
        factor = [1 if k % m == 0 else 0 for k in range(n + 1)]
        coeffs = _pmul(coeffs, factor, n)
    return coeffs


def chi_vir_rank_one_direct(k2: int, n: int) -> list[int]:
    """``((1-q)^2 / (1-2q))^{K2}`` via ``(1-q)^{2K2} (1-2q)^{-K2}``."""
    return _pmul(_binomial_series(1, 2 * k2, n), _binomial_series(2, -k2, n), n)


def chi_vir_rank_two_direct(n: int) -> list[int]:
    """``(1-q)^2 (1 - 6q + q^2) / (1-4q)^2`` expanded."""
    numerator = _pmul(_binomial_series(1, 2, n), [1, -6, 1] + [0] * n, n)
    return _pmul(numerator, _binomial_series(4, -2, n), n)


def root_product(rank: int, q: float) -> float:
    """``prod_{i<j} (1 - (x_i - x_j)^2)`` over numeric roots of ``x^r - q(x-1)^r``."""
    poly = np.zeros(rank + 1)
    poly[0] += 1.0  # numpy wants descending powers
    for k in range(rank + 1):
        # -q * C(r, k) (-1)^{r-k} x^k
        poly[rank - k] -= q * comb(rank, k) * (-1) ** (rank - k)
    roots = np.roots(poly)
    value = 1.0 + 0j
    for i in range(rank):
        for j in range(i + 1, rank):
            value *= 1 - (roots[i] - roots[j]) ** 2
    return value.real


def generalized_binomial(n: int, k: int) -> Fraction:
    """``n (n-1) ... (n-k+1) / k!`` for any integer ``n``."""
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(n - i, i + 1)
    return out


def rising_factorial_over_factorial(m: IntersectionPolynomial, l: int) -> IntersectionPolynomial:
    """``m (m+1) ... (m+l-1) / l!``."""
    out = IntersectionPolynomial.constant(1)
    for i in range(l):
        out = out * (m + i)
    return out / factorial(l)


def propagate_recurrence(seeds: dict, d: int, f: int, r: int) -> dict:
    """Fill ``n_{i,j,k}`` from ``n_{i,0,k}`` by the one-step twist recurrence."""
    table = {(i, 0, d - i): Fraction(seeds.get(i, 0)) for i in range(d + 1)}
    ratio = Fraction(f, r)
    for j in range(d):
        for i in range(d - j):
            k = d - i - j - 1
            # n_{i,j+1,k} = n_{i+1,j,k} (f/r) (i+1)! j! / ((j+1)! i!)
            table[(i, j + 1, k)] = table[(i + 1, j, k)] * ratio * Fraction(i + 1, j + 1)
    return table


# -- criteria ----------------------------------------------------------------------


def _timed(name: str, budget: float, body: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # report, never crash the suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if budget and elapsed > budget:
        ok, detail = False, f"{detail}; took {elapsed:.2f}s > {budget}s"
    return CheckResult(name, ok, f"{detail} [{elapsed:.3f}s]")


def criterion_1() -> CheckResult:
    def body():
        got = [int(c) for c in gottsche_series(1, 1, 10)]
        expected = partition_numbers(10)
        assert expected == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
        return got == expected, f"coefficients {got}"

    return _timed("1 gottsche partition numbers", 1.0, body)


def criterion_2() -> CheckResult:
    def body():
        for k2 in range(4):
            got = list(chi_vir_series(QuotSetup(1, {K2: k2}, 10)))
            if got != chi_vir_rank_one_direct(k2, 10):
                return False, f"K2={k2}: {got}"
        return True, "K2 in 0..3, N=10 exact"

    return _timed("2 chi_vir rank 1", 0, body)


def criterion_3() -> CheckResult:
    def body():
        worst = 0.0
        for rank in (2, 3):
            series = pairwise_shift_product(rank, 20)
            for q in (Fraction(1, 100), Fraction(1, 20)):
                exact = float(series.evaluate(q))
                err = abs(exact - root_product(rank, float(q)))
                worst = max(worst, err)
                if not err < 1e-8:
                    return False, f"r={rank} q={q}: error {err:.3e}"
        return True, f"max error {worst:.2e} < 1e-8"

    return _timed("3 shift product vs numeric roots", 5.0, body)


def criterion_4() -> CheckResult:
    def body():
        got = list(chi_vir_base(2, 10))
        expected = chi_vir_rank_two_direct(10)
        return got == expected, f"coefficients {[int(c) for c in got]}"

    return _timed("4 rank 2 closed form", 0, body)


def criterion_5() -> CheckResult:
    def body():
        for m in range(6):
            got = euler_top_series(QuotSetup(1, {TWIST: m}, 10))
            for l in range(11):
                if got[l] != generalized_binomial(m + l - 1, l):
                    return False, f"m={m} l={l}: {got[l]}"
        m = symbol("m")
        sym = euler_top_series(QuotSetup(1, {TWIST: m}, 4))
        for l in range(5):
            if sym[l] != rising_factorial_over_factorial(m, l):
                return False, f"symbolic l={l}: {sym[l]}"
        return True, "numeric m<=5, l<=10; symbolic l<=4"

    return _timed("5 euler top binomials", 0, body)


def criterion_6() -> CheckResult:
    def body():
        for r in range(1, 5):
            space = ProjectiveBundle(Bundle("E", r))
            got = space.integrate(parse_integrand(f"e(L)^{r}", space))
            expected = symbol("c1E.K") + r * symbol("c1L.K")
            if got != expected:
                return False, f"r={r}: e(L^[1])^r integrates to {got}"
        for r in (1, 2, 3):
            space = ProjectiveBundle(Bundle("E", r))
            got = space.integrate(space.virtual_tangent_chern())
            series = chi_vir_series(QuotSetup(r, {K2: "K2"}, 1))
            if got != series[1]:
                return False, f"r={r}: c(Tvir) gives {got}, series q^1 is {series[1]}"
        return True, "e(L^[1])^r for r<=4 and chi_vir q^1 for r<=3 match"

    return _timed("6 length one oracle closure", 5.0, body)


def criterion_7() -> CheckResult:
    def body():
        count = 0
        for r in range(1, 4):
            for r2 in range(1, r + 1):
                r1 = r - r2
                sub, quot = Bundle("A", r1), Bundle("B", r2)
                for integrand in ("1", f"e(L)^{r2}"):
                    if not verify_rank_reduction_l1(sub, quot, integrand):
                        return False, f"split {r1}+{r2}, integrand {integrand}"
                    count += 1
        return True, f"{count} splittings/integrands hold identically"

    return _timed("7 rank reduction at length one", 0, body)


def segre_sign_report() -> str:
    return (
        "closed form q^1 = (-1)^(r+1) c1(E(x)L).c1(S); length one oracle gives "
        "int s(L^[1]) = (-1)^r c1(E(x)L).c1(S); so the closed form is "
        "sum (-q)^l int s(L^[l]) (agrees with the (-1)^(lr) weighting only for odd r)"
    )


def criterion_8() -> CheckResult:
    def body():
        for r in (1, 2, 3):
            sub = segre_substitution(r, 12)
            inv = series_revert(sub)
            q = TruncatedSeries.variable(12)
            if series_compose(inv, sub) != q or series_compose(sub, inv) != q:
                return False, f"reversion roundtrip fails at r={r}"
        # r = 1 depends on L and E only through a
        a, k2 = symbol("a"), symbol("K2")
        s = segre_line_series(QuotSetup(1, {TWIST: a, K2: k2}, 6))
        if s.coefficients[1] != a:
            return False, f"r=1 q^1 coefficient is {s[1]}"
        if any(c.symbols() - {"a", "K2"} for c in s):
            return False, "r=1 series involves more than a and K2"
        for e, f_, kk in ((2, -1, 3), (0, 5, -2), (7, 7, 1)):
            res = symmetry_check(1, 1, {"c1E.K": e, "c1F.K": f_, "K2": kk})
            if not res:
                return False, res.detail
        # sign against the length one oracle
        for r in range(1, 5):
            space = ProjectiveBundle(Bundle("E", r))
            oracle = space.integrate(space.tautological_segre(Bundle.line("L")))
            aa = symbol("c1E.K") + r * symbol("c1L.K")
            integral = segre_integral_series(QuotSetup(r, {TWIST: aa, K2: "K2"}, 2))
            if integral[1] != oracle:
                return False, f"r={r}: oracle {oracle} vs series {integral[1]}"
        return True, "reversion r<=3 N=12; symmetry r=f=1; " + segre_sign_report()

    return _timed("8 segre substitution and sign", 0, body)


def criterion_9() -> CheckResult:
    def body():
        rng = random.Random(20240607)
        n = 8
        # planted factors
        for trial in range(3):
            names = ["K2", "c1E.K", "c1EF1.K"][: trial + 1]
            planted = {
                name: TruncatedSeries([1] + [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)], n)
                for name in names
            }
            U = UniversalSeries(planted, n)
            samples = []
            while True:
                samples = [
                    ({name: rng.randint(-3, 3) for name in names}, None)
                    for _ in range(len(names) + 1)
                ]
                matrix = np.array([[s[0][nm] for nm in names] for s in samples], dtype=float)
                if np.linalg.matrix_rank(matrix) == len(names):
                    break
            samples = [(exps, universal_evaluate(U, exps)) for exps, _ in samples]
            got = universal_extract(samples)
            if any(got[name] != planted[name] for name in names):
                return False, f"extraction of {names} failed"
        # multiplicativity on constructed invariants
        forms = [euler_top_universal(n), gottsche_universal(2, n), segre_line_universal(2, n)]
        forms += [chi_vir_universal(r, n) for r in (1, 2, 3)]
        for U in forms:
            for d1, d2 in (({}, {}), ({K2: 1}, {K2: 2}), ({TWIST: 2, K2: -1}, {TWIST: 3, K2: 4})):
                res = multiplicativity_check(U, d1, d2)
                if not res:
                    return False, res.detail
        # twist elimination on chi_vir families
        for r in (1, 2, 3):
            samples = []
            for e, k in ((0, 0), (1, 0), (0, 1), (3, 2), (-2, 5)):
                series = chi_vir_series(QuotSetup(r, {K2: k, "c1E.K": e}, n))
                samples.append(({"c1E.K": e, K2: k}, series))
            reduced = eliminate_twist_exponent(universal_extract(samples), {"c1E.K": r})
            if reduced.symbols != (K2,) or reduced[K2] != chi_vir_base(r, n):
                return False, f"twist elimination failed at r={r}"
        # collapse
        for d in range(5):
            for f in (1, 2, 3):
                for r in (1, 2, 3):
                    seeds = {i: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for i in range(d + 1)}
                    table = propagate_recurrence(seeds, d, f, r)
                    got = collapse_universal_polynomial(HomogeneousUniversalPolynomial(d, table, f, r))
                    if got != [seeds[i] / r**i for i in range(d + 1)]:
                        return False, f"collapse d={d} f={f} r={r}"
        return True, "extract N=8, multiplicativity, A=1 for r<=3, collapse d<=4 f,r<=3"

    return _timed("9 universal calculus", 0, body)


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
]


def run_all() -> list[CheckResult]:
    return [criterion() for criterion in CRITERIA]
