"""A quick built-in check corpus, run by ``cutmeasure selftest``."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .dsl import format_set, parse_map, parse_set
from .measure import EngineConfig, measure_nu, measure_sb, measure_unit
from .puiseux import PuiseuxScalar
from .semiring import ZERO, Inf, Level, Std, cls, t_add, t_mul, v_add, v_leq, v_mul
from .transforms import check_invariance

CORPUS = {
    "interval": ("box [0,t]", Inf(1)),
    "box": ("box [0,t] x [0,t^(1/2)]", Inf(Fraction(3, 2))),
    "triangle": ("cell base=box [0,t]; low=0; thick=x1", Inf(2)),
    "regression": ("cell base=box [t^2,t]; low=0; thick=t^2/x1", Inf(2)),
    "shear": ("cell base=box [0,t]; low=x1; thick=t^2", Inf(3)),
    "square": ("box [1/4,3/4] x [1/4,3/4]", Std(Fraction(1, 4))),
    "root": ("cell base=box [0,1]; low=0; thick=x1^(1/2)", Std(Fraction(2, 3))),
    "thin": ("box [0,1] x [1/2,1/2]", ZERO),
    "mixed": ("union(box [0,1/2] x [0,t], box [1/2,1] x [0,1/3])", Std(Fraction(1, 6))),
}

INVARIANCE = [
    ("box [0,t] x [0,t^2]", "shear 2 x1"),
    ("box [0,1] x [0,t]", "diag (t, t^(-1))"),
    ("box [0,1/2] x [0,t]", "translate (1/4, t)"),
    ("box [0,t] x [0,1/2]", "swap 1 2"),
]


def _grid():
    vals = [ZERO]
    for q in (0, Fraction(1, 2), 1, 2):
        vals.append(Inf(q))
    for r in (Fraction(1, 3), 1, 2):
        vals.append(Std(r))
    return vals


def _laws() -> str | None:
    g = _grid()
    for a, b, c in itertools.product(g, repeat=3):
        if v_add(v_add(a, b), c) != v_add(a, v_add(b, c)):
            return f"+ not associative at {a}, {b}, {c}"
        if v_mul(v_mul(a, b), c) != v_mul(a, v_mul(b, c)):
            return f"* not associative at {a}, {b}, {c}"
        if v_mul(a, v_add(b, c)) != v_add(v_mul(a, b), v_mul(a, c)):
            return f"not distributive at {a}, {b}, {c}"
        if v_leq(a, b) is True and v_leq(v_add(a, c), v_add(b, c)) is False:
            return f"+ not monotone at {a}, {b}, {c}"
    for x, y in itertools.product((Level(0), Level(1), Level(Fraction(5, 2))), repeat=2):
        if t_add(x, y) != t_add(y, x) or t_mul(x, y) != t_mul(y, x):
            return f"tropical law fails at {x}, {y}"
    return None


def _congruence() -> str | None:
    rng = random.Random(7)
    for _ in range(200):
        xs = []
        for _ in range(2):
            terms = [(Fraction(rng.randint(0, 6), rng.choice((1, 2, 3))), Fraction(rng.randint(1, 9), rng.randint(1, 4))) for _ in range(2)]
            xs.append(PuiseuxScalar(tuple(terms)))
        x, y = xs
        if x.is_zero() or y.is_zero():
            continue
        if v_add(cls(x), cls(y)) != cls(x + y) or v_mul(cls(x), cls(y)) != cls(x * y):
            return f"congruence fails at {x}, {y}"
    return None


def run(config: EngineConfig | None = None):
    """Yield ``(name, ok, detail)`` for each check."""
    yield "semiring laws", *_ok(_laws())
    yield "cls congruence", *_ok(_congruence())
    for name, (text, want) in CORPUS.items():
        X = parse_set(text)
        roundtrip = parse_set(format_set(X)) == X
        got = measure_unit(X, config)
        ok = roundtrip and got == want
        yield f"measure {name}", ok, f"{got} (expected {want})"
    got = measure_nu(parse_set("box [0,1/t] x [0,t^2]"), config)
    yield "nu normalisation", got == Level(1), str(got)
    for text, m in INVARIANCE:
        rep = check_invariance(parse_map(m), parse_set(text), config)
        yield f"invariance {m}", rep["ok"], f"{rep['measure']} vs {rep['image_measure']}"
    got = measure_sb(parse_set("box [1,3] x [1,2]"), config)
    yield "finite normalisation", got == Std(2), str(got)


def _ok(err):
    return (err is None, err or "ok")
