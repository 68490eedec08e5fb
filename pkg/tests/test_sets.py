from fractions import Fraction

import pytest

from cutmeasure.errors import ClassViolation, NoStdInterior, OutOfRange, UnsupportedImage
from cutmeasure.puiseux import ONE, PuiseuxScalar, T
from cutmeasure.sets import (
    MAX_DIM,
    Coord,
    DefinableSet,
    MonomialCell,
    MonomialFn,
    cell_has_std_interior,
    has_interior,
    has_std_interior,
    make_box,
    make_cell,
    product,
    restrict_by_thickness_level,
    split_by_thickness_level,
    split_coordinate,
    std_part,
    union,
)

HALF = PuiseuxScalar.const(Fraction(1, 2))


def triangle():
    return make_cell(make_box([(0, T)]), MonomialFn.const(0, 1), MonomialFn.var(0, 1))


def test_monomial_fn_canonical_and_class_checks():
    f = MonomialFn(1, ((ONE, (1,)), (ONE, (1,)), (T, (0,))))
    assert f.terms == ((T, (Fraction(0),)), (PuiseuxScalar.const(2), (Fraction(1),)))
    with pytest.raises(ClassViolation):
        MonomialFn(1, ((-ONE, (1,)),))
    # negative constants are allowed (box bounds like 1/2 - t)
    assert MonomialFn.const(HALF - T, 0).constant_value() == HALF - T
    with pytest.raises(ClassViolation):
        MonomialFn(2, ((ONE, (1,)),))


def test_thickness_must_be_posynomial():
    with pytest.raises(ClassViolation):
        make_cell(make_box([(0, 1)]), MonomialFn.const(0, 1), MonomialFn.var(0, 1) + MonomialFn.const(-T, 1))


def test_cell_variable_check():
    with pytest.raises(ClassViolation):
        MonomialCell((Coord(MonomialFn.const(0, 1), MonomialFn.const(1, 1)),))


def test_bounding_box_and_unit_check():
    c = make_cell(make_box([(0, T)]), MonomialFn.var(0, 1), MonomialFn.const(T**2, 1))
    assert c.bounding_box() == [(PuiseuxScalar(), T), (PuiseuxScalar(), T + T**2)]
    c.check_unit()
    big = make_box([(0, 2)])
    with pytest.raises(OutOfRange):
        big.check_unit()
    assert not big.in_unit()


def test_negative_power_near_zero_is_rejected():
    c = make_cell(make_box([(0, T)]), MonomialFn.const(0, 1), MonomialFn(1, ((T**2, (-1,)),)))
    with pytest.raises(ClassViolation):
        c.bounding_box()


def test_boxes_and_thin_coordinates():
    b = make_box([(0, T), (HALF, HALF)])
    assert b.is_box() and not b.is_open()
    assert b.coords[1].is_thin
    with pytest.raises(OutOfRange):
        make_box([(1, 0)])
    with pytest.raises(OutOfRange):
        make_box([(0, 2)], unit=True)


def test_overlapping_boxes_rejected():
    with pytest.raises(ClassViolation):
        DefinableSet.of(make_box([(0, HALF)]), make_box([(T, 1)]))
    # touching boxes are fine
    DefinableSet.of(make_box([(0, HALF)]), make_box([(HALF, 1)]))


def test_dimension_cap():
    with pytest.raises(ClassViolation):
        DefinableSet.of(make_box([(0, 1)] * (MAX_DIM + 1)))


def test_interior_predicates():
    assert has_interior(DefinableSet.of(triangle()))
    assert not has_interior(DefinableSet.of(make_box([(0, 1), (HALF, HALF)])))
    assert not has_std_interior(DefinableSet.of(triangle()))
    assert has_std_interior(DefinableSet.of(make_box([(0, HALF + T)])))
    sq = make_cell(make_box([(0, 1)]), MonomialFn.const(0, 1), MonomialFn.var(0, 1, power=Fraction(1, 2)))
    assert cell_has_std_interior(sq)
    thin_thick = make_cell(make_box([(0, 1)]), MonomialFn.const(0, 1), MonomialFn.var(0, 1, coef=T))
    assert not cell_has_std_interior(thin_thick)


def test_std_part_drops_infinitesimal_terms():
    c = make_cell(make_box([(T, HALF + T)]), MonomialFn.const(T, 1), MonomialFn.var(0, 1) + MonomialFn.const(T, 1))
    (s,) = std_part(DefinableSet.of(c))
    assert s.coords[0] == ((), ((Fraction(1, 2), ()),))
    assert s.coords[1] == ((), ((Fraction(1), (Fraction(1),)),))
    with pytest.raises(NoStdInterior):
        std_part(DefinableSet.of(triangle()))


def test_product_and_union():
    X = DefinableSet.of(make_box([(0, T)]))
    Y = DefinableSet.of(triangle())
    Z = product(X, Y)
    assert Z.dim == 3
    (c,) = Z.cells
    assert c.coords[2].thick == MonomialFn.var(1, 2)
    with pytest.raises(ClassViolation):
        union(X, Y)
    assert len(union(X, DefinableSet.of(make_box([(HALF, 1)]))).cells) == 2


def test_split_coordinate():
    box = make_box([(0, 1), (0, T)])
    parts = split_coordinate(box, 0, [HALF, PuiseuxScalar.const(Fraction(1, 4))])
    assert [p.coords[0].low.constant_value() for p in parts] == [
        PuiseuxScalar(),
        PuiseuxScalar.const(Fraction(1, 4)),
        HALF,
    ]
    with pytest.raises(OutOfRange):
        split_coordinate(box, 1, [HALF])
    with pytest.raises(UnsupportedImage):
        split_coordinate(triangle(), 1, [T**2])


def test_thickness_restriction_is_monotone_in_gamma():
    c = triangle()
    sizes = [len(restrict_by_thickness_level(c, 1, g, cap=4).cells) for g in (1, 2, 3, 4)]
    assert sizes == sorted(sizes)
    inside, outside = split_by_thickness_level(c, 1, 2, cap=4)
    assert len(inside.cells) + len(outside.cells) == len(split_by_thickness_level(c, 1, 3, cap=4)[0].cells) + len(
        split_by_thickness_level(c, 1, 3, cap=4)[1].cells
    )
    # every kept piece really has v(x1) <= 2 at its top end
    for piece in inside.cells:
        lo, hi = piece.bounding_box()[0]
        assert hi >= T**2 / 2


def test_thickness_restriction_needs_constant_base():
    c = make_cell(triangle(), MonomialFn.const(0, 2), MonomialFn.var(1, 2))
    with pytest.raises(UnsupportedImage):
        restrict_by_thickness_level(c, 2, 3)
