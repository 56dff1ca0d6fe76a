"""Multivariate polynomials over the rationals in named intersection symbols.

Symbols are plain strings such as ``K2``, ``chiTop``, ``c1E.K`` or ``g``.  A
trailing ``.K`` denotes the pairing of a first Chern class against
``c1(S)``; so ``c1EL.K`` is ``c1(E (x) L) . c1(S)`` and ``K2`` is
``c1(S)^2``.  Every symbol must be admitted by a :class:`SymbolRegistry`;
unknown names are rejected when parsing or when calling :func:`symbol`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

from .errors import DataError, UnknownSymbolError

Monomial = tuple  # tuple[tuple[str, int], ...], sorted by name
Scalar = Union[int, Fraction]

_NAME = r"[A-Za-z][A-Za-z0-9']*"


class SymbolRegistry:
    """Set of admissible symbol names: fixed names plus regex families."""

    def __init__(self, names: Iterable[str] = (), patterns: Iterable[str] = ()):
        self._names = set(names)
        self._patterns = [re.compile(p) for p in patterns]

    def __contains__(self, name: str) -> bool:
        if name in self._names:
            return True
        return any(p.fullmatch(name) for p in self._patterns)

    def register(self, name: str) -> None:
        self._names.add(name)

    def check(self, name: str) -> str:
        if name not in self:
            raise UnknownSymbolError(f"unknown symbol {name!r}")
        return name


DEFAULT_REGISTRY = SymbolRegistry(
    names=["K2", "chiTop", "g", "q", "p", "r", "f", "m", "a", "k", "d"],
    patterns=[
        # pairings against c1(S): c1E.K, c1EL.K, c1EF1.K, c1E'.K
        rf"c1{_NAME}\.K",
        # mixed pairings c1X.c1Y
        rf"c1{_NAME}\.c1{_NAME}",
        # Chern class generators and second Chern numbers: c1E, c2E, c1S
        rf"c[12]{_NAME}",
        # indexed ranks and exponents
        r"[fkrx]\d+",
    ],
)


def register_symbol(name: str) -> None:
    """Admit ``name`` in the default registry."""
    DEFAULT_REGISTRY.register(name)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    powers = dict(a)
    for name, e in b:
        powers[name] = powers.get(name, 0) + e
    return tuple(sorted(powers.items()))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class IntersectionPolynomial:
    """Polynomial with :class:`~fractions.Fraction` coefficients.

    Instances are immutable.  Zero coefficients are never stored.  Arithmetic
    mixes freely with ``int`` and ``Fraction``.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[tuple(sorted(mono))] = clean.get(tuple(sorted(mono)), 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean

    # -- construction ---------------------------------------------------------

    @classmethod
    def constant(cls, value: Scalar) -> "IntersectionPolynomial":
        return cls({(): value})

    @classmethod
    def symbol(cls, name: str, registry: SymbolRegistry = DEFAULT_REGISTRY) -> "IntersectionPolynomial":
        registry.check(name)
        return cls({((name, 1),): 1})

    @classmethod
    def coerce(cls, x) -> "IntersectionPolynomial":
        if isinstance(x, IntersectionPolynomial):
            return x
        if isinstance(x, str):
            return parse_polynomial(x)
        return cls.constant(_as_fraction(x))

    @classmethod
    def parse(cls, text: str, registry: SymbolRegistry = DEFAULT_REGISTRY) -> "IntersectionPolynomial":
        return parse_polynomial(text, registry)

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def symbols(self) -> set[str]:
        return {name for mono in self._terms for name, _ in mono}

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise DataError(f"{self} is not a constant")
        return self._terms.get((), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def coefficient(self, mono: Mapping[str, int] | Monomial) -> Fraction:
        if isinstance(mono, Mapping):
            mono = tuple(sorted((k, v) for k, v in mono.items() if v))
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e for _, e in mono) for mono in self._terms)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self._terms), default=-1)

    def coefficients_in(self, name: str) -> dict[int, "IntersectionPolynomial"]:
        """Split as a polynomial in ``name``: ``{power: coefficient}``."""
        out: dict[int, dict] = {}
        for mono, c in self._terms.items():
            powers = dict(mono)
            e = powers.pop(name, 0)
            out.setdefault(e, {})[tuple(sorted(powers.items()))] = c
        return {e: IntersectionPolynomial(t) for e, t in out.items()}

    def substitute(self, values: Mapping[str, object]) -> "IntersectionPolynomial":
        """Replace symbols by scalars or polynomials; others are kept."""
        result = IntersectionPolynomial()
        for mono, c in self._terms.items():
            term = IntersectionPolynomial.constant(c)
            for name, e in mono:
                if name in values:
                    term = term * IntersectionPolynomial.coerce(values[name]) ** e
                else:
                    term = term * IntersectionPolynomial({((name, e),): 1})
            result = result + term
        return result

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, IntersectionPolynomial):
            try:
                other = IntersectionPolynomial.constant(_as_fraction(other))
            except TypeError:
                return NotImplemented
        terms = dict(self._terms)
        for mono, c in other._terms.items():
            terms[mono] = terms.get(mono, 0) + c
        return IntersectionPolynomial(terms)

    __radd__ = __add__

    def __neg__(self):
        return IntersectionPolynomial({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, (IntersectionPolynomial, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, IntersectionPolynomial):
            terms: dict = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    m = _mono_mul(m1, m2)
                    terms[m] = terms.get(m, 0) + c1 * c2
            return IntersectionPolynomial(terms)
        try:
            c = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return IntersectionPolynomial({m: v * c for m, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, IntersectionPolynomial):
            other = other.constant_value()
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return IntersectionPolynomial({m: v / c for m, v in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DataError("polynomials only take nonnegative integer powers")
        result = IntersectionPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, IntersectionPolynomial):
            return self._terms == other._terms
        try:
            c = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({(): c} if c else {})

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term())
        return hash(frozenset(self._terms.items()))

    # -- printing -------------------------------------------------------------

    def _sorted_terms(self):
        return sorted(
            self._terms.items(),
            key=lambda mc: (-sum(e for _, e in mc[0]), mc[0]),
        )

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self._sorted_terms():
            mono_s = "*".join(n if e == 1 else f"{n}^{e}" for n, e in mono)
            mag = abs(c)
            if not mono_s:
                body = str(mag)
            elif mag == 1:
                body = mono_s
            else:
                body = f"{mag}*{mono_s}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"IntersectionPolynomial({str(self)!r})"


def symbol(name: str, registry: SymbolRegistry = DEFAULT_REGISTRY) -> IntersectionPolynomial:
    return IntersectionPolynomial.symbol(name, registry)


def symbols(names: str, registry: SymbolRegistry = DEFAULT_REGISTRY) -> tuple:
    return tuple(symbol(n, registry) for n in names.split())


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(
    rf"\s*(?:(?P<num>\d+)|(?P<name>{_NAME}(?:\.(?:K|c1{_NAME}))?)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DataError(f"cannot parse polynomial {text!r} at position {pos}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text: str, registry: SymbolRegistry):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.registry = registry

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise DataError(f"cannot parse polynomial {self.text!r}")
        self.i += 1
        return tok

    def expr(self):
        result = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self):
        result = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                result = result * rhs
            else:
                if not rhs.is_constant() or not rhs:
                    raise DataError(f"division by a non-constant or zero in {self.text!r}")
                result = result / rhs
        return result

    def factor(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.factor()
        if self.peek()[1] == "+":
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, value = self.take()
            if kind != "num":
                raise DataError(f"exponent must be a nonnegative integer in {self.text!r}")
            base = base ** int(value)
        return base

    def atom(self):
        kind, value = self.take()
        if kind == "num":
            return IntersectionPolynomial.constant(int(value))
        if kind == "name":
            return IntersectionPolynomial.symbol(value, self.registry)
        if value == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise DataError(f"unexpected {value!r} in {self.text!r}")


def parse_polynomial(text: str, registry: SymbolRegistry = DEFAULT_REGISTRY) -> IntersectionPolynomial:
    """Parse e.g. ``"2*K2 - c1E.K + 3/2"``; rejects unregistered symbols."""
    parser = _Parser(text, registry)
    if not parser.tokens:
        raise DataError("empty polynomial")
    result = parser.expr()
    if parser.i != len(parser.tokens):
        raise DataError(f"trailing input in polynomial {text!r}")
    return result


def parse_scalar(text) -> Union[Fraction, IntersectionPolynomial]:
    """Parse a rational if possible, otherwise a polynomial."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except ValueError:
        p = parse_polynomial(str(text))
        return p.constant_value() if p.is_constant() else p
