from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cutmeasure.errors import NotFinite, NotMonomial
from cutmeasure.puiseux import (
    ONE,
    ZERO,
    MonomialEnclosure,
    PuiseuxScalar,
    T,
    add,
    compare,
    format_scalar,
    monomial_power,
    mul,
    power_bounds,
    standard_part,
    valuation,
)

from .strategies import scalars


def P(*terms):
    return PuiseuxScalar(tuple(terms))


def test_canonical_form_merges_and_drops_zero_terms():
    x = P((1, 2), (1, -2), (Fraction(1, 2), 3), (Fraction(1, 2), 1))
    assert x.terms == ((Fraction(1, 2), Fraction(4)),)
    assert T - T == ZERO


def test_valuation_and_standard_part():
    x = P((0, 3), (Fraction(1, 2), -1))
    assert valuation(x) == 0
    assert standard_part(x) == 3
    assert valuation(ZERO) == float("inf")
    assert standard_part(T) == 0
    with pytest.raises(NotFinite):
        standard_part(P((-1, 1)))


def test_ordering_is_lexicographic_in_exponents():
    # t is smaller than every positive rational, larger than t^2
    assert T < PuiseuxScalar.const(Fraction(1, 10**9))
    assert T**2 < T
    assert compare(ONE - T, ONE) == "LT"
    assert compare(ONE + T, ONE) == "GT"
    assert compare(T, T) == "EQ"
    assert -T < ZERO < T


@given(scalars(), scalars(), scalars())
def test_ring_laws(x, y, z):
    assert add(add(x, y), z) == add(x, add(y, z))
    assert mul(mul(x, y), z) == mul(x, mul(y, z))
    assert add(x, y) == add(y, x)
    assert mul(x, y) == mul(y, x)
    assert mul(x, add(y, z)) == add(mul(x, y), mul(x, z))
    assert x - x == ZERO
    assert mul(x, ONE) == x


@given(scalars(), scalars())
def test_valuation_laws(x, y):
    assume(not x.is_zero() and not y.is_zero())
    assert valuation(x * y) == valuation(x) + valuation(y)
    assert valuation(x + y) >= min(valuation(x), valuation(y))
    if valuation(x) != valuation(y):
        assert valuation(x + y) == min(valuation(x), valuation(y))


@given(scalars(), scalars(), scalars())
def test_order_is_compatible_with_field_operations(x, y, z):
    assert (x < y) + (x == y) + (x > y) == 1
    if x <= y:
        assert x + z <= y + z
        if z > ZERO:
            assert x * z <= y * z


@given(scalars())
def test_format_is_stable(x):
    s = format_scalar(x)
    assert s == format_scalar(PuiseuxScalar(x.terms))


def test_format_examples():
    assert format_scalar(P((Fraction(1, 2), Fraction(3, 2)), (2, 1))) == "3/2*t^(1/2) + t^2"
    assert format_scalar(ZERO) == "0"
    assert format_scalar(ONE - T) == "1 - t"


def test_division_only_by_monomials():
    assert (T**3) / T == T**2
    assert ONE / (T * 2) == P((-1, Fraction(1, 2)))
    with pytest.raises(NotMonomial):
        ONE / (ONE + T)


def test_monomial_powers():
    assert monomial_power(P((2, 4)), Fraction(1, 2)) == P((1, 2))
    r = monomial_power(P((1, 2)), Fraction(1, 2))
    assert isinstance(r, MonomialEnclosure)
    assert r.exponent == Fraction(1, 2)
    lo, hi = r.bounds()
    assert lo < hi
    with pytest.raises(NotMonomial):
        monomial_power(ONE + T, Fraction(1, 2))


@given(
    st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=8),
    st.fractions(min_value=0, max_value=3, max_denominator=4),
    st.fractions(min_value=-2, max_value=2, max_denominator=3),
)
def test_power_bounds_bracket(c, e, q):
    x = P((e, c))
    lo, hi = power_bounds(x, q)
    assert lo <= hi
    assert valuation(lo) == valuation(hi) == e * q
    # compare coefficients: lo^den <= c^num <= hi^den
    num, den = q.numerator, q.denominator
    assert lo.lead[1] ** den <= c**num <= hi.lead[1] ** den


@given(
    st.lists(
        st.tuples(
            st.fractions(min_value=0, max_value=3, max_denominator=3),
            st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=4),
        ),
        min_size=2,
        max_size=3,
        unique_by=lambda p: p[0],
    ),
    st.fractions(min_value=Fraction(1, 3), max_value=2, max_denominator=3),
)
def test_power_bounds_for_sums(terms, q):
    x = PuiseuxScalar(tuple(terms))
    lo, hi = power_bounds(x, q)
    num, den = q.numerator, q.denominator
    # for positive q: lo <= x^q <= hi  <=>  lo^den <= x^num <= hi^den
    assert lo > ZERO
    assert lo**den <= x**num <= hi**den
    lo_inv, hi_inv = power_bounds(x, -q)
    assert lo_inv > ZERO
    assert (x**num) * (lo_inv**den) <= ONE <= (x**num) * (hi_inv**den)
