"""Exact intersection theory on ``Quot^1_S(E) = P(E)``.

``P(E)`` parametrizes one-dimensional quotients of the fibres of ``E``
(Grothendieck's convention) and ``zeta = c1(O(1))`` is the first Chern class
of the universal quotient line.  On it:

* tautological sheaves are ``F^[1] = pi^* F (x) O(1)``;
* the obstruction sheaf is the line ``pi^* K_S^dual``, so
  ``[P(E)]^vir = c1(S) . [P(E)]`` of dimension ``r``;
* ``c(T_P(E)) = pi^* c(T_S) . c(pi^* E^dual (x) O(1))`` (relative Euler
  sequence) and ``T^vir = T_P(E) - Ob``;
* ``pi_* zeta^{r-1+i} = s_i(E)`` with ``s_1 = c1``, ``s_2 = c1^2 - c2``.

Classes on ``S`` are polynomials in generators ``c1X`` (degree 1) and
``c2X`` (degree 2), with ``c1S = c1(S)`` and ``c2S = c2(T_S)``; products of
degree above 2 vanish.  Degree 2 monomials become numbers or symbols through
a :class:`PairingTable`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Callable, Mapping, Union

from .errors import DataError, DegreeError, InconsistentChernData, MissingPairingError
from .polynomial import IntersectionPolynomial

ZETA = "zeta"
SURFACE = "S"

_ZETA_POLY = IntersectionPolynomial({((ZETA, 1),): 1})


def _weight(name: str) -> int:
    return 2 if name.startswith("c2") else 1


def _mono_degree(mono) -> int:
    return sum(_weight(n) * e for n, e in mono)


def _surface_degree(mono) -> int:
    return sum(_weight(n) * e for n, e in mono if n != ZETA)


def _generator(name: str) -> IntersectionPolynomial:
    return IntersectionPolynomial({((name, 1),): 1})


class SurfaceChowClass:
    """Graded class on the surface, truncated above degree 2."""

    __slots__ = ("poly",)

    def __init__(self, poly=None):
        poly = IntersectionPolynomial.coerce(poly if poly is not None else 0)
        if any(n == ZETA for mono in poly.terms for n, _ in mono):
            raise DataError("surface classes cannot involve zeta")
        self.poly = IntersectionPolynomial(
            {m: c for m, c in poly.terms.items() if _mono_degree(m) <= 2}
        )

    @classmethod
    def generator(cls, name: str) -> "SurfaceChowClass":
        return cls(_generator(name))

    def part(self, degree: int) -> IntersectionPolynomial:
        return IntersectionPolynomial(
            {m: c for m, c in self.poly.terms.items() if _mono_degree(m) == degree}
        )

    @property
    def degree0(self) -> Fraction:
        return self.part(0).constant_term()

    @property
    def degree1(self) -> IntersectionPolynomial:
        return self.part(1)

    @property
    def degree2(self) -> IntersectionPolynomial:
        return self.part(2)

    def __add__(self, other):
        return SurfaceChowClass(self.poly + _surface_poly(other))

    __radd__ = __add__

    def __neg__(self):
        return SurfaceChowClass(-self.poly)

    def __sub__(self, other):
        return SurfaceChowClass(self.poly - _surface_poly(other))

    def __rsub__(self, other):
        return SurfaceChowClass(_surface_poly(other) - self.poly)

    def __mul__(self, other):
        return SurfaceChowClass(self.poly * _surface_poly(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return SurfaceChowClass(self.poly**n)

    def __eq__(self, other):
        try:
            return self.poly == _surface_poly(other)
        except TypeError:
            return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"SurfaceChowClass({self.poly})"


def _surface_poly(x) -> IntersectionPolynomial:
    if isinstance(x, SurfaceChowClass):
        return x.poly
    if isinstance(x, (int, Fraction)):
        return IntersectionPolynomial.constant(x)
    if isinstance(x, IntersectionPolynomial):
        return x
    raise TypeError(f"cannot use {x!r} as a surface class")


class PairingTable:
    """Evaluates degree 2 monomials on ``S`` to numbers or symbols.

    With ``values=None`` every monomial maps to its symbol: ``c1S^2 -> K2``,
    ``c1X c1S -> c1X.K``, ``c1X c1Y -> c1X.c1Y``, ``c2S -> chiTop``,
    ``c2X -> c2X``.  With ``values`` given, the same names are looked up and a
    missing name raises :class:`MissingPairingError` (never silently 0).
    """

    def __init__(self, values: Mapping[str, object] | None = None):
        self.values = None if values is None else dict(values)

    @staticmethod
    def name(mono) -> str:
        names = [n for n, e in mono for _ in range(e)]
        if len(names) == 1 and names[0].startswith("c2"):
            base = names[0][2:]
            return "chiTop" if base == SURFACE else names[0]
        if len(names) != 2:
            raise DegreeError(f"not a degree 2 monomial: {mono}")
        a, b = names
        if a == b == "c1" + SURFACE:
            return "K2"
        if b == "c1" + SURFACE:
            return f"{a}.K"
        if a == "c1" + SURFACE:
            return f"{b}.K"
        return f"{a}.{b}"

    def evaluate_monomial(self, mono):
        name = self.name(mono)
        if self.values is None:
            return IntersectionPolynomial({((name, 1),): 1})
        if name not in self.values:
            raise MissingPairingError(f"pairing table has no entry for {name}")
        return IntersectionPolynomial.coerce(self.values[name])

    def evaluate(self, cls: SurfaceChowClass):
        total = IntersectionPolynomial()
        for mono, c in cls.degree2.terms.items():
            total = total + c * self.evaluate_monomial(mono)
        return total.constant_value() if total.is_constant() else total


class Bundle:
    """Locally free sheaf on ``S`` recorded by rank and Chern classes."""

    def __init__(self, name: str, rank: int, c1=None, c2=None):
        if rank < 0:
            raise DataError("rank must be nonnegative")
        self.name = name
        self.rank = rank
        if c1 is None:
            c1 = SurfaceChowClass.generator(f"c1{name}") if rank else SurfaceChowClass()
        if c2 is None:
            c2 = SurfaceChowClass.generator(f"c2{name}") if rank >= 2 else SurfaceChowClass()
        self.c1 = c1 if isinstance(c1, SurfaceChowClass) else SurfaceChowClass(c1)
        self.c2 = c2 if isinstance(c2, SurfaceChowClass) else SurfaceChowClass(c2)

    @classmethod
    def line(cls, name: str) -> "Bundle":
        return cls(name, 1)

    def chern(self, i: int) -> SurfaceChowClass:
        if i == 0:
            return SurfaceChowClass(1)
        if i == 1:
            return self.c1
        if i == 2:
            return self.c2
        return SurfaceChowClass()

    def dual(self) -> "Bundle":
        return Bundle(f"{self.name}^", self.rank, -self.c1, self.c2)

    def extension(self, quotient: "Bundle", name: str | None = None) -> "Bundle":
        """Middle term of ``0 -> self -> ? -> quotient -> 0``."""
        return Bundle(
            name or f"{self.name}+{quotient.name}",
            self.rank + quotient.rank,
            self.c1 + quotient.c1,
            self.c2 + quotient.c2 + self.c1 * quotient.c1,
        )

    def segre(self, i: int) -> SurfaceChowClass:
        """``pi_* zeta^{r-1+i}`` on ``P(self)``."""
        if i < 0:
            return SurfaceChowClass()
        if i == 0:
            return SurfaceChowClass(1)
        if i == 1:
            return self.c1
        if i == 2:
            return self.c1 * self.c1 - self.c2
        return SurfaceChowClass()

    def __repr__(self) -> str:
        return f"Bundle({self.name!r}, rank={self.rank})"


TANGENT_S = Bundle(SURFACE, 2)  # c1 = c1S, c2 = c2S = chiTop after pairing


class PEChowClass:
    """Class on ``P(E)``: polynomial in ``zeta`` over the surface ring.

    Terms of total degree above ``dim P(E) = r + 1`` vanish.
    """

    __slots__ = ("poly", "bundle")

    def __init__(self, poly, bundle: Bundle):
        poly = IntersectionPolynomial.coerce(poly)
        dim = bundle.rank + 1
        self.bundle = bundle
        self.poly = IntersectionPolynomial(
            {
                m: c
                for m, c in poly.terms.items()
                if _mono_degree(m) <= dim and _surface_degree(m) <= 2
            }
        )

    @property
    def dimension(self) -> int:
        return self.bundle.rank + 1

    @property
    def coefficients(self) -> list[SurfaceChowClass]:
        """Surface classes ``a_k`` with ``self = sum_k a_k zeta^k``."""
        split = self.poly.coefficients_in(ZETA)
        top = max(split, default=0)
        return [SurfaceChowClass(split.get(k, IntersectionPolynomial())) for k in range(top + 1)]

    def part(self, degree: int) -> "PEChowClass":
        return PEChowClass(
            IntersectionPolynomial({m: c for m, c in self.poly.terms.items() if _mono_degree(m) == degree}),
            self.bundle,
        )

    def degrees(self) -> set[int]:
        return {_mono_degree(m) for m in self.poly.terms}

    def _coerce(self, other) -> IntersectionPolynomial:
        if isinstance(other, PEChowClass):
            if other.bundle is not self.bundle:
                raise DataError("classes live on different projective bundles")
            return other.poly
        return _surface_poly(other)

    def __add__(self, other):
        return PEChowClass(self.poly + self._coerce(other), self.bundle)

    __radd__ = __add__

    def __neg__(self):
        return PEChowClass(-self.poly, self.bundle)

    def __sub__(self, other):
        return PEChowClass(self.poly - self._coerce(other), self.bundle)

    def __rsub__(self, other):
        return PEChowClass(self._coerce(other) - self.poly, self.bundle)

    def __mul__(self, other):
        return PEChowClass(self.poly * self._coerce(other), self.bundle)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = PEChowClass(1, self.bundle)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        try:
            return self.poly == self._coerce(other)
        except (TypeError, DataError):
            return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"PEChowClass({self.poly}, rank={self.bundle.rank})"


def pe_pushforward(c: PEChowClass) -> SurfaceChowClass:
    """``pi_*`` to ``S``: ``a zeta^k -> a s_{k-r+1}(E)``."""
    r = c.bundle.rank
    total = SurfaceChowClass()
    for k, a in enumerate(c.coefficients):
        if a.poly:
            total = total + a * c.bundle.segre(k - r + 1)
    return total


class ProjectiveBundle:
    """``Quot^1_S(E) = P(E)`` with its virtual class and tautological classes."""

    def __init__(self, bundle: Bundle, pairings: PairingTable | Mapping | None = None):
        if bundle.rank < 1:
            raise DataError("P(E) needs rank at least 1")
        self.E = bundle
        if not isinstance(pairings, PairingTable):
            pairings = PairingTable(pairings)
        self.pairings = pairings

    @property
    def rank(self) -> int:
        return self.E.rank

    @property
    def dimension(self) -> int:
        return self.E.rank + 1

    @property
    def virtual_dimension(self) -> int:
        return self.E.rank

    def cls(self, poly) -> PEChowClass:
        return PEChowClass(poly, self.E)

    @property
    def zeta(self) -> PEChowClass:
        return self.cls(_ZETA_POLY)

    def pullback(self, surface_class) -> PEChowClass:
        return self.cls(_surface_poly(surface_class))

    def one(self) -> PEChowClass:
        return self.cls(1)

    def twisted_chern(self, F: Bundle) -> PEChowClass:
        """Total Chern class of ``pi^* F (x) O(1)``."""
        one_plus_zeta = self.one() + self.zeta
        total = self.cls(0)
        for i in range(min(F.rank, 2) + 1):
            total = total + self.pullback(F.chern(i)) * one_plus_zeta ** (F.rank - i)
        return total

    def tautological_chern(self, F: Bundle) -> PEChowClass:
        """``c(F^[1])``."""
        return self.twisted_chern(F)

    def tautological_euler(self, F: Bundle) -> PEChowClass:
        """``e(F^[1]) = c_f(F^[1])``."""
        return self.twisted_chern(F).part(F.rank)

    def tautological_segre(self, F: Bundle) -> PEChowClass:
        """``s(F^[1]) = c(F^[1])^{-1}``."""
        return invert_unipotent(self.twisted_chern(F))

    def tangent_chern(self) -> PEChowClass:
        return self.pullback(TANGENT_S.chern(0) + TANGENT_S.c1 + TANGENT_S.c2) * self.twisted_chern(self.E.dual())

    def obstruction_chern(self) -> PEChowClass:
        return self.one() + self.pullback(TANGENT_S.c1)

    def obstruction_euler(self) -> PEChowClass:
        return self.pullback(TANGENT_S.c1)

    def virtual_tangent_chern(self) -> PEChowClass:
        """``c(T^vir) = c(T_P(E)) / c(Ob)``."""
        return self.tangent_chern() * invert_unipotent(self.obstruction_chern())

    def pushforward(self, c: PEChowClass) -> SurfaceChowClass:
        return pe_pushforward(c)

    def integrate(self, integrand: PEChowClass, strict: bool = False):
        """``int_{[P(E)]^vir} integrand``; only the degree ``r`` part contributes."""
        if strict and integrand.poly and integrand.degrees() != {self.virtual_dimension}:
            raise DegreeError(
                f"integrand has degrees {sorted(integrand.degrees())}, "
                f"virtual dimension is {self.virtual_dimension}"
            )
        top = integrand.part(self.virtual_dimension) * self.obstruction_euler()
        return self.pairings.evaluate(pe_pushforward(top))


def invert_unipotent(c: PEChowClass) -> PEChowClass:
    """Inverse of a class with constant term 1, by the finite geometric series."""
    if c.poly.constant_term() != 1:
        raise DataError("only classes with constant term 1 are inverted")
    u = c - 1
    result = PEChowClass(1, c.bundle)
    power = PEChowClass(1, c.bundle)
    for _ in range(c.dimension):
        power = power * (-u)
        result = result + power
    return result


# -- integrand expressions ------------------------------------------------------

_FACTOR = re.compile(
    r"\s*(?:(?P<kind>[ecs])\((?P<arg>[A-Za-z][A-Za-z0-9']*)\)|(?P<num>\d+))\s*(?:\^\s*(?P<exp>\d+))?\s*"
)


def parse_integrand(text: str, space: ProjectiveBundle, ranks: Mapping[str, int] | None = None) -> PEChowClass:
    """Build an integrand from e.g. ``"e(L)^2"``, ``"c(Tvir)"``, ``"s(F)*e(L)"``.

    ``e``, ``c``, ``s`` take the Euler, total Chern and total Segre class of
    the tautological sheaf ``X^[1]``; ``c(Tvir)`` is the virtual tangent
    bundle.  Tautological sheaves default to rank 1 unless given in ``ranks``;
    ``E`` refers to the quotiented sheaf itself.
    """
    ranks = dict(ranks or {})
    result = space.one()
    factors = [f for f in text.split("*")]
    if not text.strip():
        raise DataError("empty integrand")
    for factor in factors:
        m = _FACTOR.fullmatch(factor)
        if not m:
            raise DataError(f"cannot parse integrand factor {factor!r}")
        exp = int(m.group("exp") or 1)
        if m.group("num"):
            value = space.cls(int(m.group("num")))
        else:
            kind, arg = m.group("kind"), m.group("arg")
            if arg == "Tvir":
                if kind != "c":
                    raise DataError("only c(Tvir) is supported")
                value = space.virtual_tangent_chern()
            else:
                F = space.E if arg == "E" else Bundle(arg, ranks.get(arg, 1))
                value = {
                    "e": space.tautological_euler,
                    "c": space.tautological_chern,
                    "s": space.tautological_segre,
                }[kind](F)
        result = result * value**exp
    return result


Integrand = Union[str, PEChowClass, Callable[[ProjectiveBundle], PEChowClass]]


def _build(integrand: Integrand, space: ProjectiveBundle, ranks=None) -> PEChowClass:
    if isinstance(integrand, str):
        return parse_integrand(integrand, space, ranks)
    if isinstance(integrand, PEChowClass):
        return integrand
    return integrand(space)


def quot1_virtual_integral(setup, integrand: Integrand, ranks: Mapping[str, int] | None = None, strict: bool = False):
    """Integral over ``[Quot^1_S(E)]^vir``.

    ``setup`` is a :class:`ProjectiveBundle`, a :class:`Bundle` (symbolic
    pairings), or a :class:`~quotvir.invariants.QuotSetup` whose pairings feed
    the table (all pairings symbolic when it supplies none).
    """
    if isinstance(setup, ProjectiveBundle):
        space = setup
    elif isinstance(setup, Bundle):
        space = ProjectiveBundle(setup)
    else:
        values = dict(setup.pairings) or None
        space = ProjectiveBundle(Bundle("E", setup.rank), values)
        if ranks is None:
            ranks = {f"F{i}": f for i, f in enumerate(setup.tautological_ranks, 1)}
    return space.integrate(_build(integrand, space, ranks), strict=strict)


def verify_rank_reduction_l1(
    sub: Bundle,
    quotient: Bundle,
    integrand: Integrand,
    total: Bundle | None = None,
    pairings: PairingTable | Mapping | None = None,
    ranks: Mapping[str, int] | None = None,
) -> bool:
    """Check ``int_{P(E'')^vir} P = int_{P(E)^vir} P . e(E'^dual [1])``.

    ``0 -> sub -> total -> quotient -> 0``.  When ``total`` is omitted it is
    built from the sequence; when given its Chern data must agree.
    """
    expected = sub.extension(quotient, name="E")
    if total is None:
        total = expected
    elif (
        total.rank != expected.rank
        or total.c1 != expected.c1
        or total.c2 != expected.c2
    ):
        raise InconsistentChernData(
            f"{total!r} does not have the Chern data of an extension of "
            f"{quotient!r} by {sub!r}"
        )
    small = ProjectiveBundle(quotient, pairings)
    big = ProjectiveBundle(total, pairings)
    lhs = small.integrate(_build(integrand, small, ranks))
    if sub.rank == 0:
        rhs = big.integrate(_build(integrand, big, ranks))
    else:
        rhs = big.integrate(_build(integrand, big, ranks) * big.tautological_euler(sub.dual()))
    return lhs == rhs
