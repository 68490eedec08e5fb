"""Closed rational intervals and certified rational-power enclosures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_TOL = Fraction(1, 10**12)


def as_fraction(x) -> Fraction:
    # Fraction(x) is slow even when x already is one
    return x if type(x) is Fraction else Fraction(x)


def integer_root(n: int, k: int) -> int:
    """Largest integer r with r**k <= n (n >= 0, k >= 1)."""
    if n < 0 or k < 1:
        raise ValueError("integer_root needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    r = 1 << ((n.bit_length() + k - 1) // k)
    # Newton iteration from above converges monotonically
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "Interval":
        x = as_fraction(x)
        return cls(x, x)

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "Interval") -> "Interval":
        if self.lo >= 0 and other.lo >= 0:
            return Interval(self.lo * other.lo, self.hi * other.hi)
        ps = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Interval(min(ps), max(ps))

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def __str__(self) -> str:
        if self.exact:
            return str(self.lo)
        return f"[{self.lo}, {self.hi}]"


def rational_power(c: Fraction, q: Fraction, tol: Fraction = DEFAULT_TOL) -> Interval:
    """Certified enclosure of c**q for c > 0 and rational q.

    The result is a point interval when c**q is rational.
    """
    c, q = Fraction(c), Fraction(q)
    if c <= 0:
        raise ValueError("rational_power needs a positive base")
    if q < 0:
        c, q = 1 / c, -q
    p, k = q.numerator, q.denominator
    x = c**p
    a, b = x.numerator, x.denominator
    ra, rb = integer_root(a, k), integer_root(b, k)
    if ra**k == a and rb**k == b:
        return Interval.point(Fraction(ra, rb))
    bits = 16
    while True:
        scale = 1 << bits
        # r**k <= a*scale**k/b < (r+1)**k, so r/scale <= x**(1/k) < (r+1)/scale
        r = integer_root(a * scale**k // b, k)
        out = Interval(Fraction(r, scale), Fraction(r + 1, scale))
        if out.width <= tol:
            return out
        bits *= 2
