"""Finite Puiseux polynomials over the rationals.

A scalar is a finite sum of terms ``c * t**e`` with rational ``c`` and ``e``,
stored with exponents strictly increasing and no zero coefficients, so equality
is structural.  ``t`` is a positive infinitesimal: the order is decided by the
sign of the lowest-exponent coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from operator import itemgetter
from typing import Iterable, Union

from .errors import NotFinite, NotMonomial
from .intervals import DEFAULT_TOL, Interval, rational_power

INF = math.inf

Rational = Union[int, Fraction]


def _frac(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


@dataclass(frozen=True)
class PuiseuxScalar:
    terms: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        # sort and merge; hashing Fractions costs more than comparing them
        items = sorted(((_frac(e), _frac(c)) for e, c in self.terms), key=itemgetter(0))
        canon = []
        for e, c in items:
            if canon and canon[-1][0] == e:
                canon[-1] = (e, canon[-1][1] + c)
            else:
                canon.append((e, c))
        object.__setattr__(self, "terms", tuple(t for t in canon if t[1] != 0))

    # construction helpers

    @classmethod
    def const(cls, c) -> "PuiseuxScalar":
        return cls(((Fraction(0), _frac(c)),))

    @classmethod
    def monomial(cls, c, e) -> "PuiseuxScalar":
        return cls(((_frac(e), _frac(c)),))

    @classmethod
    def coerce(cls, x) -> "PuiseuxScalar":
        if isinstance(x, PuiseuxScalar):
            return x
        return cls.const(x)

    # predicates

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_rational(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def sign(self) -> int:
        if not self.terms:
            return 0
        return 1 if self.terms[0][1] > 0 else -1

    @property
    def lead(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the lowest-order term."""
        if not self.terms:
            raise ValueError("zero has no leading term")
        return self.terms[0]

    def coefficient(self, e) -> Fraction:
        e = _frac(e)
        for ee, c in self.terms:
            if ee == e:
                return c
        return Fraction(0)

    # arithmetic

    def __add__(self, other):
        other = PuiseuxScalar.coerce(other)
        return PuiseuxScalar(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxScalar(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-PuiseuxScalar.coerce(other))

    def __rsub__(self, other):
        return PuiseuxScalar.coerce(other) - self

    def __mul__(self, other):
        other = PuiseuxScalar.coerce(other)
        return PuiseuxScalar(
            tuple((e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in other.terms)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = PuiseuxScalar.coerce(other)
        if not other.is_monomial():
            raise NotMonomial("division is only defined by single-term scalars")
        e, c = other.terms[0]
        return PuiseuxScalar(tuple((ee - e, cc / c) for ee, cc in self.terms))

    def __rtruediv__(self, other):
        return PuiseuxScalar.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("use monomial_power for rational exponents")
        if n < 0:
            return PuiseuxScalar.const(1) / (self ** (-n))
        out = PuiseuxScalar.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # order

    def compare(self, other) -> int:
        return (self - PuiseuxScalar.coerce(other)).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"PuiseuxScalar({format_scalar(self)!r})"


T = PuiseuxScalar.monomial(1, 1)
ZERO = PuiseuxScalar()
ONE = PuiseuxScalar.const(1)


def add(x: PuiseuxScalar, y: PuiseuxScalar) -> PuiseuxScalar:
    return x + y


def mul(x: PuiseuxScalar, y: PuiseuxScalar) -> PuiseuxScalar:
    return x * y


def compare(x: PuiseuxScalar, y: PuiseuxScalar) -> str:
    """Return ``"LT"``, ``"EQ"`` or ``"GT"``."""
    return {-1: "LT", 0: "EQ", 1: "GT"}[x.compare(y)]


def valuation(x: PuiseuxScalar):
    """Least exponent of ``x``; ``math.inf`` for zero."""
    return x.terms[0][0] if x.terms else INF


def standard_part(x: PuiseuxScalar) -> Fraction:
    if valuation(x) < 0:
        raise NotFinite(f"{x} is infinite")
    return x.coefficient(0)


@dataclass(frozen=True)
class MonomialEnclosure:
    """``c * t**exponent`` with ``c`` known only up to a rational interval."""

    coefficient: Interval
    exponent: Fraction

    def bounds(self) -> tuple[PuiseuxScalar, PuiseuxScalar]:
        return (
            PuiseuxScalar.monomial(self.coefficient.lo, self.exponent),
            PuiseuxScalar.monomial(self.coefficient.hi, self.exponent),
        )


def monomial_power(x: PuiseuxScalar, q, tol: Fraction = DEFAULT_TOL):
    """``x**q`` for a positive single-term ``x``.

    Returns a PuiseuxScalar when the coefficient power is rational, otherwise a
    MonomialEnclosure whose coefficient interval has width at most ``tol``.
    """
    q = _frac(q)
    if not x.is_monomial() or x.terms[0][1] <= 0:
        raise NotMonomial(f"{x} is not a positive single-term scalar")
    e, c = x.terms[0]
    enc = rational_power(c, q, tol)
    if enc.exact:
        return PuiseuxScalar.monomial(enc.lo, e * q)
    return MonomialEnclosure(enc, e * q)


def power_bounds(x: PuiseuxScalar, q) -> tuple[PuiseuxScalar, PuiseuxScalar]:
    """Certified scalars ``lo <= x**q <= hi`` for ``x >= 0``.

    Exact for integer ``q`` (nonnegative, or negative with single-term ``x``)
    and tight up to the coefficient enclosure for single-term ``x``.  For
    other ``x = c*t^v*(1 + eps)`` with ``|eps| <= K*t^d`` infinitesimal,
    ``|(1 + eps)^q - 1| <= (|q| + 1)*|eps|`` gives looser bounds.
    """
    q = _frac(q)
    if q == 0:
        return ONE, ONE
    if x.is_zero():
        if q < 0:
            raise NotFinite("negative power of zero")
        return ZERO, ZERO
    if q.denominator == 1 and (q > 0 or x.is_monomial()):
        v = x ** int(q)
        return v, v
    if x.sign() < 0:
        raise NotFinite("power of a negative scalar")
    if not x.is_monomial():
        (v, c), rest = x.terms[0], x.terms[1:]
        lo, hi = power_bounds(PuiseuxScalar.monomial(c, v), q)
        k = sum(abs(ci) for _, ci in rest) / c * (abs(q) + 1)
        slack = PuiseuxScalar.monomial(k, rest[0][0] - v)
        return lo * (ONE - slack), hi * (ONE + slack)
    r = monomial_power(x, q)
    if isinstance(r, PuiseuxScalar):
        return r, r
    return r.bounds()


def _fmt_rat(q: Fraction) -> str:
    return str(q)


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({e})"


def format_scalar(x: PuiseuxScalar) -> str:
    """Canonical text form, e.g. ``3/2*t^(1/2) + t^2``; parses back to ``x``."""
    if not x.terms:
        return "0"
    parts = []
    for i, (e, c) in enumerate(x.terms):
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = _fmt_rat(a)
        else:
            mono = "t" if e == 1 else f"t^{_fmt_exp(e)}"
            body = mono if a == 1 else f"{_fmt_rat(a)}*{mono}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def scalar_from_terms(terms: Iterable[tuple]) -> PuiseuxScalar:
    return PuiseuxScalar(tuple((_frac(e), _frac(c)) for e, c in terms))
