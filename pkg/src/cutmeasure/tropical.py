"""Valuation-space model of a cell in the infinitesimal regime.

For a point ``x`` of a cell write ``w_i = v(x_i)``.  Coordinate ``k`` runs over
``(f, f + h)``; with ``a = v(f)`` and ``l = v(h)`` (both minima of linear
forms in ``w_0..w_{k-1}``, since ``f`` and ``h`` are posynomials) the fibre
either pins ``w_k = a`` when ``a < l`` (length of valuation ``l``), or lets
``w_k`` range over ``[l, a]`` where the part of valuation ``w_k`` has length of
valuation ``w_k``.  Valuation constraints on ``w_k`` imposed by later
coordinates are carried as linear inequalities.

Two independent routes use the model:

* ``bracket_levels`` evaluates lower and upper sums over geometric partitions
  ``t^(j*delta)`` of the last coordinate's effective thickness, recursing on the
  base slabs;
* ``exact_level`` minimises the total fibre valuation jointly over all
  coordinates by linear programming (the polyhedral shortcut).
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from . import lp
from .errors import ClassViolation
from .puiseux import valuation
from .sets import MonomialCell, MonomialFn

INF = math.inf

Form = tuple[Fraction, tuple[Fraction, ...]]  # const + coeffs . w


@dataclass(frozen=True)
class CoordModel:
    alpha: tuple[Form, ...] | None  # None: lower bound is 0
    lam: tuple[Form, ...]


@dataclass(frozen=True)
class CellModel:
    coords: tuple[CoordModel, ...]
    cap: Fraction

    @property
    def dim(self) -> int:
        return len(self.coords)


def _forms(fn: MonomialFn) -> tuple[Form, ...]:
    return tuple((c, tuple(e)) for c, e in fn.valuation_forms())


def cell_model(cell: MonomialCell, cap: Fraction | None = None) -> CellModel:
    coords = []
    for k, c in enumerate(cell.coords):
        if c.thick is None:
            raise ClassViolation("thin cells have no valuation model")
        low = c.low
        if low.is_zero():
            alpha = None
        else:
            if low.constant_part().sign() < 0:
                raise ClassViolation(f"lower bound of coordinate {k + 1} has a negative constant term")
            if low.is_constant() and low.constant_value().sign() <= 0:
                raise ClassViolation(f"lower bound of coordinate {k + 1} is not positive")
            alpha = _forms(low)
        coords.append(CoordModel(alpha, _forms(c.thick)))
    if cap is None:
        cap = default_cap(coords)
    return CellModel(tuple(coords), Fraction(cap))


def default_cap(coords) -> Fraction:
    """A valuation bound beyond which coordinates are treated as 0.

    Points with ``w_i > cap`` lie in a slab of width ``t^cap``, so truncating
    there only affects sets whose level already exceeds ``cap``.
    """
    consts = [Fraction(1)]
    exps = [Fraction(1)]
    for c in coords:
        for forms in (c.alpha or (), c.lam):
            for const, co in forms:
                consts.append(abs(const))
                exps.append(sum(abs(x) for x in co) or Fraction(1))
    n = max(len(coords), 1)
    return Fraction(4 * n) * max(consts) * max(exps) + 4


def denominators(cell: MonomialCell) -> int:
    d = 1
    for c in cell.coords:
        for fn in (c.low, c.thick):
            if fn is None:
                continue
            for coef, exps in fn.terms:
                for e, _ in coef.terms:
                    d = lcm(d, Fraction(e).denominator)
                for e in exps:
                    d = lcm(d, e.denominator)
    return d


# linear-form helpers (forms over m variables)


def _sub(f: Form, g: Form) -> Form:
    return (f[0] - g[0], tuple(a - b for a, b in zip(f[1], g[1])))


def _le(f: Form, g: Form):
    """Constraint ``f <= g``."""
    d = _sub(f, g)
    return (d[1], -d[0])


def _pad(f: Form, m: int) -> Form:
    return (f[0], f[1] + (Fraction(0),) * (m - len(f[1])))


def _eval(f: Form, w) -> Fraction:
    return f[0] + sum(a * x for a, x in zip(f[1], w))


def box_constraints(m: int, cap: Fraction):
    out = []
    for i in range(m):
        e = [Fraction(0)] * m
        e[i] = Fraction(1)
        out.append((tuple(e), cap))
        e = [Fraction(0)] * m
        e[i] = Fraction(-1)
        out.append((tuple(e), Fraction(0)))
    return out


@lru_cache(maxsize=1 << 16)
def split(model: CellModel, k: int, cons) -> tuple[tuple[tuple, Form], ...]:
    """Eliminate ``w_k`` from a region of the first ``k+1`` coordinates.

    Returns pieces ``(constraints over w_0..w_{k-1}, E)`` covering the region's
    projection, where ``E`` is the valuation of the fibre length over the piece.
    """
    coord = model.coords[k]
    zero_k = (Fraction(0),) * k
    lowers: list[Form] = [(Fraction(0), zero_k)]
    uppers: list[Form] = [(model.cap, zero_k)]
    rest = []
    for coeffs, b in cons:
        c = coeffs[k]
        head = coeffs[:k]
        if c == 0:
            rest.append((head, b))
            continue
        form = (b / c, tuple(-a / c for a in head))
        (uppers if c > 0 else lowers).append(form)
    lam = [_pad(f, k) for f in coord.lam]
    alpha = None if coord.alpha is None else [_pad(f, k) for f in coord.alpha]

    pieces = []

    def emit(extra, E):
        pc = lp.normalize(rest + extra, k)
        if pc is None or lp.minimize_normalized((Fraction(0),) * k, pc, k) is None:
            return
        pieces.append((pc, E))

    for il, l in enumerate(lam):
        lmin = [_le(l, g) for j, g in enumerate(lam) if j != il]
        # pinned fibre: w_k = a < l
        if alpha is not None:
            for ia, a in enumerate(alpha):
                extra = list(lmin)
                extra += [_le(a, g) for j, g in enumerate(alpha) if j != ia]
                extra.append(_le(a, l))
                extra += [_le(p, a) for p in lowers]
                extra += [_le(a, q) for q in uppers]
                emit(extra, l)
        # ranging fibre, cheapest point at l
        extra = list(lmin)
        if alpha is not None:
            extra += [_le(l, a) for a in alpha]
        extra += [_le(p, l) for p in lowers]
        extra += [_le(l, q) for q in uppers]
        emit(extra, l)
        # ranging fibre cut from below at the largest lower constraint
        for ip, p in enumerate(lowers):
            extra = list(lmin)
            extra += [_le(g, p) for j, g in enumerate(lowers) if j != ip]
            extra.append(_le(l, p))
            if alpha is not None:
                extra += [_le(p, a) for a in alpha]
            extra += [_le(p, q) for q in uppers]
            emit(extra, p)
    return tuple(pieces)


@lru_cache(maxsize=1 << 16)
def _range(E: Form, cons, m: int):
    lo = lp.minimize_normalized(E[1], cons, m)
    hi = -lp.minimize_normalized(tuple(-c for c in E[1]), cons, m)
    return E[0] + lo, E[0] + hi


def bracket_levels(model: CellModel, delta: Fraction, k: int | None = None, cons=None):
    """Levels ``(lo, hi)`` of the upper and lower sums for the region.

    ``lo <= true level <= hi``: the upper sum is the larger value, hence the
    smaller level.  Partition slabs of the effective thickness are refined
    best first: the slab whose upper-sum term is largest (least level) is
    split on the ``delta`` grid until it is one grid step wide.  Every
    intermediate partition is a valid partition, so each slab's lower-sum
    term is itself a bound on the level from above.
    """
    if k is None:
        k = model.dim - 1
        cons = lp.normalize(box_constraints(model.dim, model.cap), model.dim)
    pieces = split(model, k, cons)
    if k == 0:
        # one-dimensional slices are intervals, measured exactly
        lvl = min((E[0] for _, E in pieces), default=INF)
        return lvl, lvl
    zero = (Fraction(0),) * k
    heap: list = []
    best_hi = INF
    extra_points = set()
    varying = []
    for pc, E in pieces:
        emin, emax = _range(E, pc, k)
        if emin == emax:
            sub_lo, sub_hi = bracket_levels(model, delta, k - 1, pc)
            best_hi = min(best_hi, emin + sub_hi)
            heapq.heappush(heap, (emin + sub_lo, 0, emin, emin, -1))
            extra_points.add(emin)
        else:
            varying.append((pc, E))

    def push(idx, a, b, sub):
        nonlocal best_hi
        sub_lo, sub_hi = bracket_levels(model, delta, k - 1, sub)
        if sub_lo == INF:
            return
        lo_t = _grid_floor(a, delta, extra_points) + sub_lo
        hi_t = _grid_ceil(b, delta, extra_points) + sub_hi
        best_hi = min(best_hi, hi_t)
        heapq.heappush(heap, (lo_t, -(b - a), a, b, idx))

    for idx, (pc, E) in enumerate(varying):
        emin, emax = _range(E, pc, k)
        push(idx, emin, emax, pc)
    while heap:
        lo_t, _, a, b, idx = heap[0]
        if lo_t >= best_hi:
            return best_hi, best_hi
        mid = _split_point(a, b, delta, extra_points)
        if idx < 0 or mid is None:
            return lo_t, best_hi
        heapq.heappop(heap)
        pc, E = varying[idx]
        for x, y in ((a, mid), (mid, b)):
            sub = lp.normalize(list(pc) + [_le(E, (y, zero)), _le((x, zero), E)], k)
            if sub is not None and lp.minimize_normalized(zero, sub, k) is not None:
                push(idx, x, y, sub)
    return INF, INF


def _split_point(a: Fraction, b: Fraction, delta: Fraction, extra) -> Fraction | None:
    """A partition point strictly inside ``(a, b)`` near its middle, or None."""
    inside = [p for p in extra if a < p < b]
    lo_j = math.floor(a / delta) + 1
    hi_j = math.ceil(b / delta) - 1
    if lo_j <= hi_j:
        inside.append(Fraction((lo_j + hi_j) // 2) * delta)
    if not inside:
        return None
    m = (a + b) / 2
    return min(inside, key=lambda p: (abs(p - m), p))


def _grid_floor(x: Fraction, delta: Fraction, extra) -> Fraction:
    g = math.floor(x / delta) * delta
    cands = [g] + [p for p in extra if g < p <= x]
    return max(cands)


def _grid_ceil(x: Fraction, delta: Fraction, extra) -> Fraction:
    g = math.ceil(x / delta) * delta
    cands = [g] + [p for p in extra if x <= p < g]
    return min(cands)


def exact_level(model: CellModel) -> Fraction:
    """Minimum total fibre valuation, by enumerating linear pieces."""
    n = model.dim
    base = box_constraints(n, model.cap)
    options = []
    for k, coord in enumerate(model.coords):
        lam = [_pad(f, n) for f in coord.lam]
        alpha = None if coord.alpha is None else [_pad(f, n) for f in coord.alpha]
        wk = (Fraction(0), tuple(Fraction(1 if i == k else 0) for i in range(n)))
        opts = []
        for il, l in enumerate(lam):
            lmin = [_le(l, g) for j, g in enumerate(lam) if j != il]
            if alpha is not None:
                for ia, a in enumerate(alpha):
                    cons = list(lmin)
                    cons += [_le(a, g) for j, g in enumerate(alpha) if j != ia]
                    cons += [_le(a, l), _le(wk, a), _le(a, wk)]
                    opts.append((cons, l))
            cons = list(lmin) + [_le(l, wk)]
            if alpha is not None:
                cons += [_le(wk, a) for a in alpha]
            opts.append((cons, wk))
        options.append(opts)
    best = INF
    for choice in itertools.product(*options):
        cons = list(base)
        const = Fraction(0)
        obj = [Fraction(0)] * n
        for c, f in choice:
            cons += c
            const += f[0]
            obj = [a + b for a, b in zip(obj, f[1])]
        v = lp.minimize(tuple(obj), cons, n)
        if v is None:
            continue
        best = min(best, const + v)
    return best
