import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given

from cutmeasure.errors import OutOfDomain
from cutmeasure.intervals import Interval
from cutmeasure.puiseux import PuiseuxScalar, T
from cutmeasure.semiring import (
    ONE,
    T_ONE,
    T_ZERO,
    ZERO,
    Indistinguishable,
    Inf,
    Level,
    Std,
    cls,
    t_add,
    t_leq,
    t_mul,
    to_tropical,
    tropical_from_json,
    tropical_to_json,
    v_add,
    v_leq,
    v_mul,
    v_prod,
    v_sum,
    value_from_json,
    value_to_json,
)

from .strategies import finite_nonneg_scalars, tropical_values, values


def test_examples():
    assert v_add(Std(Fraction(1, 2)), Inf(3)) == Std(Fraction(1, 2))
    assert v_add(Inf(1), Inf(2)) == Inf(1)
    assert v_mul(Inf(1), Inf(Fraction(1, 2))) == Inf(Fraction(3, 2))
    assert v_mul(Std(Fraction(1, 2)), Inf(1)) == Inf(1)
    assert v_mul(Std(2), Std(3)) == Std(6)
    assert v_add(ZERO, Inf(4)) == Inf(4)
    assert v_mul(ZERO, Std(5)) == ZERO


def test_order_examples():
    assert v_leq(ZERO, Inf(7)) is True
    assert v_leq(Inf(2), Inf(1)) is True  # deeper level is smaller
    assert v_leq(Inf(1), Inf(2)) is False
    assert v_leq(Inf(0), Std(Fraction(1, 10**6))) is True
    assert v_leq(Std(1), Std(2)) is True
    fuzzy = Std(Interval(Fraction(1), Fraction(3)))
    assert v_leq(fuzzy, Std(2)) is Indistinguishable
    with pytest.raises(TypeError):
        bool(Indistinguishable)


def test_cls_examples():
    assert cls(PuiseuxScalar.const(Fraction(1, 2)) + T) == Std(Fraction(1, 2))
    assert cls(3 * T**2) == Inf(2)
    assert cls(PuiseuxScalar()) == ZERO
    with pytest.raises(OutOfDomain):
        cls(-T)
    with pytest.raises(OutOfDomain):
        cls(1 / T)


def _eq(a, b):
    return a == b


@given(values, values, values)
def test_semiring_laws(a, b, c):
    assert v_add(v_add(a, b), c) == v_add(a, v_add(b, c))
    assert v_mul(v_mul(a, b), c) == v_mul(a, v_mul(b, c))
    assert v_add(a, b) == v_add(b, a)
    assert v_mul(a, b) == v_mul(b, a)
    assert v_mul(a, v_add(b, c)) == v_add(v_mul(a, b), v_mul(a, c))
    assert v_add(a, ZERO) == a and v_mul(a, ONE) == a and v_mul(a, ZERO) == ZERO


@given(values, values, values)
def test_order_compatibility(a, b, c):
    if v_leq(a, b) is True:
        assert v_leq(v_add(a, c), v_add(b, c)) is not False
        assert v_leq(v_mul(a, c), v_mul(b, c)) is not False
    # totality on exact values
    assert v_leq(a, b) is True or v_leq(b, a) is True


@given(tropical_values, tropical_values, tropical_values)
def test_tropical_laws(x, y, z):
    assert t_add(t_add(x, y), z) == t_add(x, t_add(y, z))
    assert t_mul(t_mul(x, y), z) == t_mul(x, t_mul(y, z))
    assert t_add(x, y) == t_add(y, x) and t_mul(x, y) == t_mul(y, x)
    assert t_mul(x, t_add(y, z)) == t_add(t_mul(x, y), t_mul(x, z))
    assert t_add(x, T_ZERO) == x and t_mul(x, T_ONE) == x
    if t_leq(x, y):
        assert t_leq(t_add(x, z), t_add(y, z)) and t_leq(t_mul(x, z), t_mul(y, z))


@given(values, values)
def test_to_tropical_is_a_homomorphism(a, b):
    assert to_tropical(v_add(a, b)) == t_add(to_tropical(a), to_tropical(b))
    assert to_tropical(v_mul(a, b)) == t_mul(to_tropical(a), to_tropical(b))
    if v_leq(a, b) is True:
        assert t_leq(to_tropical(a), to_tropical(b))


@given(finite_nonneg_scalars(), finite_nonneg_scalars())
def test_cls_congruence(x, y):
    assert v_add(cls(x), cls(y)) == cls(x + y)
    assert v_mul(cls(x), cls(y)) == cls(x * y)


@given(values)
def test_json_round_trip(a):
    assert value_from_json(value_to_json(a)) == a


@given(tropical_values)
def test_tropical_json_round_trip(x):
    assert tropical_from_json(tropical_to_json(x)) == x


def test_json_shapes():
    assert value_to_json(ZERO) == {"kind": "zero"}
    assert value_to_json(Inf(Fraction(3, 2))) == {"kind": "inf", "level": "3/2"}
    assert value_to_json(Std(Fraction(1, 4))) == {"kind": "std", "lo": "1/4", "hi": "1/4"}
    assert tropical_to_json(Level(math.inf)) == {"level": "inf"}
    assert tropical_to_json(Level(Fraction(3, 2))) == {"level": "3/2"}


def test_sums_and_products():
    assert v_sum([]) == ZERO
    assert v_prod([]) == ONE
    assert v_sum([Inf(3), Inf(1), ZERO]) == Inf(1)
    assert v_prod([Inf(1), Std(2), Inf(2)]) == Inf(3)


def test_invalid_values_rejected():
    with pytest.raises(ValueError):
        Inf(-1)
    with pytest.raises(ValueError):
        Std(0)


def test_exhaustive_small_grid():
    grid = [ZERO] + [Inf(q) for q in (0, Fraction(1, 3), 1)] + [Std(r) for r in (Fraction(1, 2), 2)]
    for a, b, c in itertools.product(grid, repeat=3):
        assert v_mul(a, v_add(b, c)) == v_add(v_mul(a, b), v_mul(a, c))
