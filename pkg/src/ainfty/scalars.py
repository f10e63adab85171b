"""Exact scalars: arbitrary-precision rationals and parameterized polynomials.

Rationals are plain ``fractions.Fraction`` (always reduced, positive
denominator).  ``PolyQ`` is a multivariate polynomial over Q with named
parameters, kept in a canonical graded-lex term order so that equality is
structural.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction, "PolyQ"]

# A monomial is a sorted tuple of (parameter name, positive exponent).
Monomial = tuple[tuple[str, int], ...]

ONE: Monomial = ()


def _mono_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def _mono_key(mono: Monomial):
    # Graded-lex: total degree first, then lexicographic on the exponent
    # sequence with parameters in name order.
    return (_mono_degree(mono), mono)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged: dict[str, int] = dict(a)
    for name, e in b:
        merged[name] = merged.get(name, 0) + e
    return tuple(sorted(merged.items()))


class MissingParameterError(KeyError):
    """Raised when a substitution does not cover every parameter."""


class PolyQ:
    """Polynomial over Q in named parameters, immutable and canonical.

    Terms are stored sorted by graded-lex order; zero coefficients are never
    kept.  Two polynomials are equal iff their term tuples are equal.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | Iterable[tuple[Monomial, Fraction]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        for mono, coeff in items:
            c = Fraction(coeff)
            if c:
                acc[mono] = acc.get(mono, Fraction(0)) + c
        self._terms: tuple[tuple[Monomial, Fraction], ...] = tuple(
            (m, c) for m, c in sorted(acc.items(), key=lambda t: _mono_key(t[0])) if c
        )

    @staticmethod
    def const(c) -> "PolyQ":
        return PolyQ({ONE: Fraction(c)})

    @staticmethod
    def var(name: str) -> "PolyQ":
        return PolyQ({((name, 1),): Fraction(1)})

    @property
    def terms(self) -> tuple[tuple[Monomial, Fraction], ...]:
        return self._terms

    def parameters(self) -> tuple[str, ...]:
        seen = set()
        for mono, _ in self._terms:
            for name, _ in mono:
                seen.add(name)
        return tuple(sorted(seen))

    def is_constant(self) -> bool:
        return all(m == ONE for m, _ in self._terms)

    def constant_value(self) -> Fraction:
        """Constant term (the whole value when :meth:`is_constant`)."""
        for mono, c in self._terms:
            if mono == ONE:
                return c
        return Fraction(0)

    def total_degree(self) -> int:
        return max((_mono_degree(m) for m, _ in self._terms), default=0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        other = as_polyq(other)
        if not isinstance(other, PolyQ):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other) -> "PolyQ":
        other = as_polyq(other)
        if not isinstance(other, PolyQ):
            return NotImplemented
        return PolyQ(list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self) -> "PolyQ":
        return PolyQ([(m, -c) for m, c in self._terms])

    def __sub__(self, other):
        other = as_polyq(other)
        if not isinstance(other, PolyQ):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return as_polyq(other) - self

    def __mul__(self, other) -> "PolyQ":
        other = as_polyq(other)
        if not isinstance(other, PolyQ):
            return NotImplemented
        acc: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms:
            for mb, cb in other._terms:
                m = _mono_mul(ma, mb)
                acc[m] = acc.get(m, Fraction(0)) + ca * cb
        return PolyQ(acc)

    __rmul__ = __mul__

    def substitute(self, assignment: Mapping[str, Fraction]) -> Fraction:
        """Exact evaluation at a full rational assignment of the parameters."""
        total = Fraction(0)
        for mono, coeff in self._terms:
            value = coeff
            for name, exp in mono:
                if name not in assignment:
                    raise MissingParameterError(name)
                value *= Fraction(assignment[name]) ** exp
            total += value
        return total

    def substitute_params(self, mapping: Mapping[str, "PolyQ"]) -> "PolyQ":
        """Substitute some parameters by polynomials; others are kept."""
        result = PolyQ()
        for mono, coeff in self._terms:
            term = PolyQ.const(coeff)
            for name, exp in mono:
                factor = mapping.get(name)
                if factor is None:
                    factor = PolyQ.var(name)
                for _ in range(exp):
                    term = term * factor
            result = result + term
        return result

    def decompose(self) -> tuple[Fraction, dict[str, Fraction], "PolyQ"]:
        """Split into (constant, linear part by parameter, degree >= 2 rest)."""
        const = Fraction(0)
        linear: dict[str, Fraction] = {}
        higher: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms:
            deg = _mono_degree(mono)
            if deg == 0:
                const = coeff
            elif deg == 1:
                linear[mono[0][0]] = coeff
            else:
                higher[mono] = coeff
        return const, linear, PolyQ(higher)

    def __repr__(self) -> str:
        return f"PolyQ({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def as_polyq(x) -> PolyQ | object:
    if isinstance(x, PolyQ):
        return x
    if isinstance(x, (int, Fraction)):
        return PolyQ.const(x)
    return x


def poly_substitute(p: PolyQ, assignment: Mapping[str, Fraction]) -> Fraction:
    return p.substitute(assignment)


def poly_decompose(p: PolyQ) -> tuple[Fraction, dict[str, Fraction], PolyQ]:
    return p.decompose()


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(p: PolyQ) -> str:
    """Canonical text form, e.g. ``3/2*a1^2*b1 + -1``."""
    if not p:
        return "0"
    parts = []
    for mono, coeff in p.terms:
        factors = []
        if coeff != 1 or not mono:
            factors.append(format_rational(coeff))
        for name, exp in mono:
            factors.append(name if exp == 1 else f"{name}^{exp}")
        parts.append("*".join(factors))
    return " + ".join(parts)
