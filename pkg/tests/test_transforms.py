from fractions import Fraction

import pytest

from cutmeasure.dsl import parse_map, parse_scalar, parse_set
from cutmeasure.errors import UnsupportedImage
from cutmeasure.measure import measure_sb, measure_unit
from cutmeasure.puiseux import PuiseuxScalar
from cutmeasure.semiring import Inf, Std
from cutmeasure.sets import DefinableSet
from cutmeasure.transforms import AffineMap, IsoPipeline, ShearMap, Swap, apply, check_invariance

F = Fraction
t = parse_scalar("t")


def test_shear_image_keeps_measure():
    X = parse_set("box [0,t] x [0,t^2]")
    Y = apply(parse_map("shear 2 x1"), X)
    assert Y == parse_set("cell base=box [0,t]; low=x1; thick=t^2")
    assert measure_unit(Y) == Inf(3) == measure_unit(X)


def test_inverse_shear_cancels():
    Y = parse_set("cell base=box [0,t]; low=x1 + t; thick=t^2")
    X = apply(parse_map("shear 2 - x1"), Y)
    assert X == parse_set("box [0,t] x [t,t + t^2]")
    with pytest.raises(UnsupportedImage):
        apply(parse_map("shear 2 - 2*x1"), Y)


def test_shear_rejects_referenced_target():
    X = parse_set("cell base=box [0,t]; low=0; thick=x1")
    with pytest.raises(UnsupportedImage):
        apply(parse_map("shear 1 t"), X)


def test_diag_t_inverse_t():
    X = parse_set("box [0,1] x [0,t]")
    pipe = parse_map("diag (t, t^(-1))")
    assert pipe.unit
    Y = apply(pipe, X)
    assert Y == parse_set("box [0,t] x [0,1]")
    rep = check_invariance(pipe, X)
    assert rep["ok"] and rep["status"] == "equal" and rep["image_measure"] == Inf(1)


def test_swap_on_boxes_only():
    X = parse_set("box [0,t] x [0,1/2]")
    assert apply(Swap(0, 1), X) == parse_set("box [0,1/2] x [0,t]")
    with pytest.raises(UnsupportedImage):
        apply(Swap(0, 1), parse_set("cell base=box [0,t]; low=0; thick=x1"))
    with pytest.raises(UnsupportedImage):
        apply(Swap(0, 2), X)


def test_translation_and_reflection():
    X = parse_set("box [1/4,1/4 + t]")
    assert apply(AffineMap.translate(F(1, 2)), X) == parse_set("box [3/4,3/4 + t]")
    R = AffineMap((-PuiseuxScalar.const(1),), (PuiseuxScalar.const(1),))
    assert apply(R, X) == parse_set("box [3/4 - t,3/4]")
    one = PuiseuxScalar.const(1)
    R2 = AffineMap((-one, one), (one, PuiseuxScalar.const(0)))
    with pytest.raises(UnsupportedImage):
        apply(R2, parse_set("cell base=box [0,t]; low=0; thick=x1"))


def test_affine_dimension_mismatch():
    with pytest.raises(UnsupportedImage):
        apply(AffineMap.diag(2), parse_set("box [0,t] x [0,t]"))
    with pytest.raises(ValueError):
        AffineMap.diag(0)


def test_determinant_bookkeeping():
    pipe = IsoPipeline((AffineMap.diag(t, 1 / t), ShearMap(1, parse_map("shear 2 x1").steps[0].f), Swap(0, 1)))
    assert pipe.det == PuiseuxScalar.const(1) and pipe.unit
    assert AffineMap.diag(2, 3).det == PuiseuxScalar.const(6)
    assert not IsoPipeline((AffineMap.diag(t, 1),)).unit


def test_non_unit_standard_scaling():
    X = parse_set("box [0,t] x [0,1/4]")
    rep = check_invariance(parse_map("diag (2, 3)"), X)
    assert rep["expected"] == Inf(1) == rep["image_measure"]
    rep = check_invariance(parse_map("diag (2, 2)"), parse_set("box [0,1/4] x [0,1/4]"))
    assert rep["expected"] == Std(F(1, 4)) and rep["status"] == "equal"
    with pytest.raises(UnsupportedImage):
        check_invariance(parse_map("diag (t, 1)"), X)


def test_invariance_on_triangle_family():
    tri = parse_set("cell base=box [0,t]; low=0; thick=x1")
    for m in ["diag (t^(-1), t)", "translate (0, 1/4)", "shear 2 1/3"]:
        rep = check_invariance(parse_map(m), tri)
        assert rep["ok"], m
        assert rep["image_measure"] == measure_sb(tri) == Inf(2)
    with pytest.raises(UnsupportedImage):
        apply(parse_map("translate (1/2, 0)"), tri)
