"""The value semirings.

``MeasureValue`` is the concrete form of the cut semiring over the finite
nonnegative scalars: every cut is ``Zero``, ``Inf(level)`` (positive
infinitesimals of valuation ``level``) or ``Std(size)`` (finite
non-infinitesimals with standard part ``size``).  ``TropicalValue`` is the
(min, +) semiring over the rationals extended by ``+inf``; ``to_tropical``
sends a measure value to its level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import OutOfDomain
from .intervals import Interval, as_fraction
from .puiseux import PuiseuxScalar, standard_part, valuation

INF = math.inf


class _Indistinguishable:
    """Comparison outcome for overlapping interval-valued sizes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("Indistinguishable has no truth value; refine and retry")

    def __repr__(self):
        return "Indistinguishable"


Indistinguishable = _Indistinguishable()


@dataclass(frozen=True)
class MeasureValue:
    kind: str  # "zero" | "inf" | "std"
    level: Fraction | None = None
    size: Interval | None = None

    def __post_init__(self):
        if self.kind == "zero":
            if self.level is not None or self.size is not None:
                raise ValueError("Zero carries no data")
        elif self.kind == "inf":
            if self.level is None or self.level < 0:
                raise ValueError("Inf needs a nonnegative level")
            object.__setattr__(self, "level", as_fraction(self.level))
        elif self.kind == "std":
            if self.size is None or self.size.lo <= 0:
                raise ValueError("Std needs a positive size interval")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_inf(self) -> bool:
        return self.kind == "inf"

    @property
    def is_std(self) -> bool:
        return self.kind == "std"

    def __add__(self, other: "MeasureValue") -> "MeasureValue":
        return v_add(self, other)

    def __mul__(self, other: "MeasureValue") -> "MeasureValue":
        return v_mul(self, other)

    def __str__(self) -> str:
        if self.kind == "zero":
            return "Zero"
        if self.kind == "inf":
            return f"Inf({self.level})"
        return f"Std({self.size})"

    __repr__ = __str__


ZERO = MeasureValue("zero")


def Inf(level) -> MeasureValue:
    level = as_fraction(level)
    return MeasureValue("inf", level=level)


def Std(size) -> MeasureValue:
    if not isinstance(size, Interval):
        size = Interval.point(size)
    return MeasureValue("std", size=size)


ONE = Std(1)


def cls(x: PuiseuxScalar) -> MeasureValue:
    """The cut generated by a finite nonnegative scalar."""
    if x.sign() < 0:
        raise OutOfDomain(f"{x} is negative")
    if x.is_zero():
        return ZERO
    v = valuation(x)
    if v < 0:
        raise OutOfDomain(f"{x} is infinite")
    if v > 0:
        return Inf(v)
    return Std(standard_part(x))


def v_add(a: MeasureValue, b: MeasureValue) -> MeasureValue:
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a.is_std and b.is_std:
        return Std(a.size + b.size)
    if a.is_std:
        return a
    if b.is_std:
        return b
    return Inf(min(a.level, b.level))


def v_mul(a: MeasureValue, b: MeasureValue) -> MeasureValue:
    if a.is_zero or b.is_zero:
        return ZERO
    if a.is_std and b.is_std:
        return Std(a.size * b.size)
    if a.is_std:
        return b
    if b.is_std:
        return a
    return Inf(a.level + b.level)


_RANK = {"zero": 0, "inf": 1, "std": 2}


def v_leq(a: MeasureValue, b: MeasureValue):
    """``True``/``False``, or ``Indistinguishable`` for overlapping Std sizes."""
    if a.kind != b.kind:
        return _RANK[a.kind] < _RANK[b.kind]
    if a.is_zero:
        return True
    if a.is_inf:
        return a.level >= b.level
    if a.size.hi <= b.size.lo:
        return True
    if a.size.lo > b.size.hi:
        return False
    return Indistinguishable


def v_sum(values) -> MeasureValue:
    out = ZERO
    for v in values:
        out = v_add(out, v)
    return out


def v_prod(values) -> MeasureValue:
    out = ONE
    for v in values:
        out = v_mul(out, v)
    return out


@dataclass(frozen=True, order=False)
class TropicalValue:
    level: Union[Fraction, float]

    def __post_init__(self):
        if type(self.level) is float:
            if self.level != INF:
                raise ValueError("the only float level is +inf")
        else:
            object.__setattr__(self, "level", as_fraction(self.level))

    @property
    def is_zero(self) -> bool:
        return type(self.level) is float

    def __add__(self, other: "TropicalValue") -> "TropicalValue":
        return t_add(self, other)

    def __mul__(self, other: "TropicalValue") -> "TropicalValue":
        return t_mul(self, other)

    def __str__(self) -> str:
        return "Level(inf)" if self.is_zero else f"Level({self.level})"

    __repr__ = __str__


def Level(level) -> TropicalValue:
    return TropicalValue(level)


T_ZERO = TropicalValue(INF)
T_ONE = TropicalValue(0)


def t_add(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    return a if a.level <= b.level else b


def t_mul(a: TropicalValue, b: TropicalValue) -> TropicalValue:
    if a.is_zero or b.is_zero:
        return T_ZERO
    return TropicalValue(a.level + b.level)


def t_leq(a: TropicalValue, b: TropicalValue) -> bool:
    return a.level >= b.level


def to_tropical(a: MeasureValue) -> TropicalValue:
    if a.is_zero:
        return T_ZERO
    if a.is_inf:
        return TropicalValue(a.level)
    return T_ONE


# JSON rendering


def value_to_json(a: MeasureValue) -> dict:
    if a.is_zero:
        return {"kind": "zero"}
    if a.is_inf:
        return {"kind": "inf", "level": str(a.level)}
    return {"kind": "std", "lo": str(a.size.lo), "hi": str(a.size.hi)}


def value_from_json(d: dict) -> MeasureValue:
    kind = d["kind"]
    if kind == "zero":
        return ZERO
    if kind == "inf":
        return Inf(Fraction(d["level"]))
    if kind == "std":
        return Std(Interval(Fraction(d["lo"]), Fraction(d["hi"])))
    raise ValueError(f"unknown kind {kind!r}")


def tropical_to_json(a: TropicalValue) -> dict:
    return {"level": "inf" if a.is_zero else str(a.level)}


def tropical_from_json(d: dict) -> TropicalValue:
    return T_ZERO if d["level"] == "inf" else TropicalValue(Fraction(d["level"]))
