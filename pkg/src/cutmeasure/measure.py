"""The measure engine.

Cells with standard interior measure as the Lebesgue measure of their
standard part.  Thin cells measure Zero.  Every other cell is infinitesimal
and its level is bracketed by lower and upper sums over geometric partitions,
then recovered exactly once the bracket pins a single admissible rational.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy

from . import tropical
from .errors import BracketDiverged, ClassViolation, NotFinite, OutOfRange, ToleranceUnreachable
from .intervals import Interval
from .puiseux import ONE, PuiseuxScalar, valuation
from .semiring import (
    ZERO,
    Inf,
    Level,
    MeasureValue,
    Std,
    TropicalValue,
    t_mul,
    to_tropical,
    v_add,
    v_mul,
)
from .sets import (
    DefinableSet,
    MonomialCell,
    StdCell,
    cell_has_std_interior,
    product,
    std_part,
)
from .transforms import AffineMap, _referenced

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineConfig:
    delta0: Fraction = Fraction(1, 8)
    max_refine: int = 20
    denom_cap: int | None = None  # None: lcm of input denominators * 64
    leb_tol: Fraction = Fraction(1, 10**6)
    level_cap: Fraction | None = None  # None: derived from the cell data

    def __post_init__(self):
        object.__setattr__(self, "delta0", Fraction(self.delta0))
        object.__setattr__(self, "leb_tol", Fraction(self.leb_tol))
        if self.delta0 <= 0 or self.leb_tol <= 0 or self.max_refine < 0:
            raise ValueError("delta0 and leb_tol must be positive, max_refine nonnegative")
        if self.denom_cap is not None and self.denom_cap <= 0:
            raise ValueError("denom_cap must be positive")


DEFAULT = EngineConfig()


@dataclass(frozen=True)
class LevelBracket:
    """Certified ``lower <= mu <= upper``."""

    lower: MeasureValue
    upper: MeasureValue
    delta: Fraction
    depth: int = 0

    def __add__(self, other: "LevelBracket") -> "LevelBracket":
        return LevelBracket(
            v_add(self.lower, other.lower),
            v_add(self.upper, other.upper),
            min(self.delta, other.delta),
            max(self.depth, other.depth),
        )


def _level_value(level) -> MeasureValue:
    return ZERO if level == math.inf else Inf(level)


def _as_bracket(v: MeasureValue, delta) -> LevelBracket:
    return LevelBracket(v, v, Fraction(delta))


def _check_infinitesimal(cell: MonomialCell) -> None:
    if not cell.is_open():
        raise ClassViolation("bracketing needs every coordinate thick")
    if cell_has_std_interior(cell):
        raise ClassViolation("cell has standard interior; use the Lebesgue route")


def bracket_measure(cell: MonomialCell, delta, config: EngineConfig = DEFAULT) -> LevelBracket:
    """Lower and upper sums of an infinitesimal cell at partition step ``delta``."""
    _check_infinitesimal(cell)
    model = tropical.cell_model(cell, config.level_cap)
    lo, hi = tropical.bracket_levels(model, Fraction(delta))
    return LevelBracket(_level_value(hi), _level_value(lo), Fraction(delta))


def denom_cap_for(cell: MonomialCell, config: EngineConfig) -> int:
    if config.denom_cap is not None:
        return config.denom_cap
    return tropical.denominators(cell) * 64


def _recover(cell: MonomialCell, config: EngineConfig) -> MeasureValue:
    model = tropical.cell_model(cell, config.level_cap)
    D = denom_cap_for(cell, config)
    shortcut = tropical.exact_level(model)
    lo, hi = -math.inf, math.inf
    delta = config.delta0
    for r in range(config.max_refine + 1):
        delta = config.delta0 / 2**r
        blo, bhi = tropical.bracket_levels(model, delta)
        if not (blo <= shortcut <= bhi):
            raise BracketDiverged(
                f"polyhedral level {shortcut} outside bracket [{blo}, {bhi}]",
                bracket=LevelBracket(_level_value(bhi), _level_value(blo), delta, r),
            )
        lo, hi = max(lo, blo), min(hi, bhi)
        if lo == hi:
            log.debug("exact bracket at depth %d: %s", r, lo)
            return _level_value(lo)
        if hi - lo < Fraction(1, D):
            k = math.ceil(lo * D)
            if Fraction(k, D) <= hi:
                cand = Fraction(k, D)
                if cand == shortcut:
                    log.debug("recovered %s at depth %d", cand, r)
                    return Inf(cand)
    raise BracketDiverged(
        f"no unique level with denominator dividing {D} after {config.max_refine} refinements",
        bracket=LevelBracket(_level_value(hi), _level_value(lo), delta, config.max_refine),
    )


def measure_cell(cell: MonomialCell, config: EngineConfig = DEFAULT) -> MeasureValue:
    if not cell.is_open():
        return ZERO
    if cell_has_std_interior(cell):
        return Std(lebesgue_std(std_part(DefinableSet.of(cell)), config.leb_tol))
    return _recover(cell, config)


def measure_unit(X: DefinableSet, config: EngineConfig | None = None) -> MeasureValue:
    """Measure of a set inside the unit cube, summed cellwise.

    Raises BracketDiverged carrying the summed bracket when some cell cannot be
    pinned down.
    """
    config = config or DEFAULT
    X.check_unit()
    total: MeasureValue | LevelBracket = ZERO
    diverged = False
    for cell in X.cells:
        try:
            part: MeasureValue | LevelBracket = measure_cell(cell, config)
        except BracketDiverged as e:
            part, diverged = e.bracket, True
        if isinstance(total, LevelBracket) or isinstance(part, LevelBracket):
            tb = total if isinstance(total, LevelBracket) else _as_bracket(total, config.delta0)
            pb = part if isinstance(part, LevelBracket) else _as_bracket(part, config.delta0)
            total = tb + pb
        else:
            total = v_add(total, part)
    if diverged:
        assert isinstance(total, LevelBracket)
        raise BracketDiverged("some cells were only bracketed", bracket=total)
    return total


def measure_product(X: DefinableSet, Y: DefinableSet, config: EngineConfig | None = None) -> MeasureValue:
    return measure_unit(product(X, Y), config)


# standard regime


def _std_expr(cell: StdCell):
    n = cell.dim
    xs = sympy.symbols(f"x1:{n + 1}", positive=True)

    def fn(terms, k):
        out = sympy.Integer(0)
        for coef, exps in terms:
            m = sympy.Rational(coef.numerator, coef.denominator)
            for i in range(k):
                e = exps[i]
                if e:
                    m *= xs[i] ** sympy.Rational(e.numerator, e.denominator)
            out += m
        return out

    integrand = sympy.Integer(1)
    for k in range(n - 1, -1, -1):
        low_terms, thick_terms = cell.coords[k]
        lo = fn(low_terms, k)
        hi = lo + fn(thick_terms, k)
        integrand = sympy.integrate(integrand, (xs[k], lo, hi))
    return sympy.nsimplify(integrand) if integrand.has(sympy.Float) else sympy.simplify(integrand)


def _iv_eval(expr):
    """Evaluate a closed sympy constant in mpmath interval arithmetic."""
    iv = mpmath.iv
    if expr.is_Rational:
        return iv.mpf(expr.p) / expr.q
    if expr is sympy.pi:
        return iv.pi
    if expr is sympy.E:
        return iv.e
    if expr.is_Add:
        out = iv.mpf(0)
        for a in expr.args:
            out += _iv_eval(a)
        return out
    if expr.is_Mul:
        out = iv.mpf(1)
        for a in expr.args:
            out *= _iv_eval(a)
        return out
    if expr.is_Pow:
        base, e = expr.args
        b = _iv_eval(base)
        if e.is_Integer:
            return b ** int(e)
        if e.is_Rational:
            return iv.exp(iv.log(b) * (iv.mpf(e.p) / e.q))
        return iv.exp(iv.log(b) * _iv_eval(e))
    if isinstance(expr, sympy.log):
        return iv.log(_iv_eval(expr.args[0]))
    if isinstance(expr, sympy.exp):
        return iv.exp(_iv_eval(expr.args[0]))
    if isinstance(expr, sympy.atan):
        return iv.atan(_iv_eval(expr.args[0]))
    raise ToleranceUnreachable(f"cannot enclose {expr}")


def _enclose(expr, tol: Fraction, max_prec: int = 2048) -> Interval:
    prec = 64
    while prec <= max_prec:
        with mpmath.workprec(prec):
            v = _iv_eval(expr)
            lo, hi = _to_frac(v.a), _to_frac(v.b)
        if hi - lo <= tol:
            return Interval(lo, hi)
        prec *= 2
    raise ToleranceUnreachable(f"enclosure of {expr} did not reach width {tol}")


def _to_frac(x) -> Fraction:
    m, e = mpmath.mpf(x).man_exp
    return Fraction(m) * Fraction(2) ** e


def lebesgue_std(cells, tol=Fraction(1, 10**6)) -> Interval:
    """Certified enclosure of the total Lebesgue measure of real cells."""
    if not cells:
        raise ValueError("no cells")
    tol = Fraction(tol)
    total = sympy.Integer(0)
    for c in cells:
        total += _std_expr(c)
    total = sympy.nsimplify(total) if total.has(sympy.Float) else total
    if total.is_Rational:
        return Interval.point(Fraction(total.p, total.q))
    return _enclose(total, tol)


# normalisation into the unit cube


def _lcm_exponent_denominators(X: DefinableSet) -> int:
    d = 1
    for cell in X.cells:
        for c in cell.coords:
            for fn in (c.low, c.thick):
                if fn is None:
                    continue
                for _, exps in fn.terms:
                    for e in exps:
                        d = math.lcm(d, e.denominator)
    return d


def _bbox(X: DefinableSet):
    lows, highs = [None] * X.dim, [None] * X.dim
    for cell in X.cells:
        for i, (a, b) in enumerate(cell.bounding_box()):
            if lows[i] is None or a < lows[i]:
                lows[i] = a
            if highs[i] is None or b > highs[i]:
                highs[i] = b
    return lows, highs


def _shifts(X: DefinableSet, lows):
    shifts = []
    for i, a in enumerate(lows):
        if a.sign() >= 0:
            shifts.append(PuiseuxScalar())
            continue
        if any(_referenced(cell, i) for cell in X.cells):
            raise ClassViolation(f"coordinate {i + 1} feeds later bounds but takes negative values")
        shifts.append(-a)
    return shifts


def _perfect_power_at_least(x: PuiseuxScalar, L: int) -> int:
    r = 1
    while PuiseuxScalar.const(r**L) < x:
        r += 1
    return r**L


def normalize_map(X: DefinableSet, lam: PuiseuxScalar | None = None, shift=None, allow_infinite=False):
    """An affine ``T`` with diagonal ``lam`` mapping ``X`` into the unit cube.

    Returns ``(T, n_levels)`` where ``lam = c*t^s`` and ``-n*s`` is the level
    correction for the tropical measure.
    """
    if X.dim == 0 or not X.cells:
        return AffineMap((), ()), 0
    lows, highs = _bbox(X)
    if not allow_infinite:
        for v in lows + highs:
            if valuation(v) < 0:
                raise NotFinite(f"bound {v} is infinite")
    b = list(shift) if shift is not None else _shifts(X, lows)
    b = [PuiseuxScalar.coerce(x) for x in b]
    if lam is None:
        spans = [h + s for h, s in zip(highs, b)]
        s_exp = max([Fraction(0)] + [-Fraction(valuation(x)) for x in spans if not x.is_zero()])
        ts = PuiseuxScalar.monomial(1, s_exp)
        L = _lcm_exponent_denominators(X)
        m = max(_perfect_power_at_least(x * ts, L) for x in spans) if spans else 1
        lam = ts / PuiseuxScalar.const(m)
    lam = PuiseuxScalar.coerce(lam)
    if not lam.is_monomial() or lam.sign() <= 0:
        raise ValueError("the scaling must be a positive single-term scalar")
    T = AffineMap((lam,) * X.dim, tuple(lam * x for x in b))
    return T, lam


def _image(X: DefinableSet, T: AffineMap) -> DefinableSet:
    TX = DefinableSet(tuple(T.image_cell(c) for c in X.cells), X.dim)
    try:
        TX.check_unit()
    except OutOfRange as e:
        raise OutOfRange(f"normalising map does not reach the unit cube: {e}") from None
    return TX


def measure_sb(X: DefinableSet, config: EngineConfig | None = None, *, lam=None, shift=None) -> MeasureValue:
    """Measure of a set with finite bounds, via an affine map into [0,1]^n.

    ``lam`` must be a positive rational when given.
    """
    T, lam = normalize_map(X, lam, shift)
    if valuation(lam) != 0:
        raise ValueError("scalings for finite sets must have standard size")
    if not T.diagonal:
        return ZERO if not X.cells else Std(1)
    inner = measure_unit(_image(X, T), config)
    return v_mul(Std(1 / lam.coefficient(0) ** X.dim), inner)


def measure_nu(X: DefinableSet, config: EngineConfig | None = None, *, lam=None, shift=None) -> TropicalValue:
    """Tropical measure of a bounded set (infinite bounds allowed)."""
    T, lam = normalize_map(X, lam, shift, allow_infinite=True)
    if not T.diagonal:
        return Level(math.inf) if not X.cells else Level(0)
    inner = measure_unit(_image(X, T), config)
    return t_mul(to_tropical(inner), Level(-X.dim * Fraction(valuation(lam))))
