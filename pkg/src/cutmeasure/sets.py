"""The measurable set class: cells with posynomial thickness, and unions.

A cell is a sequence of coordinates.  Coordinate ``k`` (0-based) ranges over
``(low, low + thick)`` where ``low`` and ``thick`` are functions of the first
``k`` coordinates; a coordinate without thickness is thin (``x_k = low``).
Storing the thickness rather than the upper bound keeps every thickness a
posynomial, so its valuation at a point is a minimum of linear forms in the
valuations of the coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ClassViolation, NoStdInterior, OutOfRange, UnsupportedImage
from .puiseux import ONE, ZERO, PuiseuxScalar, power_bounds, standard_part, valuation

Exps = tuple[Fraction, ...]

MAX_DIM = 4


@dataclass(frozen=True)
class MonomialFn:
    """Sum of ``coef * prod(x_i ** e_i)`` over the first ``nvars`` coordinates.

    Non-constant terms need positive coefficients; the constant term may have
    any sign (it is how box bounds such as ``1/2 - t`` are carried).
    """

    nvars: int
    terms: tuple[tuple[PuiseuxScalar, Exps], ...] = ()

    def __post_init__(self):
        acc: dict[Exps, PuiseuxScalar] = {}
        for coef, exps in self.terms:
            exps = tuple(Fraction(e) for e in exps)
            if len(exps) != self.nvars:
                raise ClassViolation(f"term has {len(exps)} exponents, expected {self.nvars}")
            coef = PuiseuxScalar.coerce(coef)
            acc[exps] = acc.get(exps, ZERO) + coef
        canon = []
        for exps in sorted(acc):
            coef = acc[exps]
            if coef.is_zero():
                continue
            if any(exps) and coef.sign() < 0:
                raise ClassViolation("posynomial terms need positive coefficients")
            canon.append((coef, exps))
        object.__setattr__(self, "terms", tuple(canon))

    @classmethod
    def const(cls, c, nvars: int) -> "MonomialFn":
        return cls(nvars, ((PuiseuxScalar.coerce(c), (Fraction(0),) * nvars),))

    @classmethod
    def var(cls, i: int, nvars: int, coef=ONE, power=1) -> "MonomialFn":
        exps = [Fraction(0)] * nvars
        exps[i] = Fraction(power)
        return cls(nvars, ((PuiseuxScalar.coerce(coef), tuple(exps)),))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for _, e in self.terms)

    def constant_value(self) -> PuiseuxScalar:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.terms[0][0] if self.terms else ZERO

    def constant_part(self) -> PuiseuxScalar:
        for coef, exps in self.terms:
            if not any(exps):
                return coef
        return ZERO

    def is_posynomial(self) -> bool:
        return all(c.sign() > 0 for c, _ in self.terms)

    def depends_on(self, i: int) -> bool:
        return any(exps[i] != 0 for _, exps in self.terms)

    def __add__(self, other: "MonomialFn") -> "MonomialFn":
        n = max(self.nvars, other.nvars)
        return MonomialFn(n, self.pad(n).terms + other.pad(n).terms)

    def scale(self, c: PuiseuxScalar) -> "MonomialFn":
        return MonomialFn(self.nvars, tuple((coef * c, e) for coef, e in self.terms))

    def pad(self, nvars: int) -> "MonomialFn":
        """View as a function of more (trailing, unused) variables."""
        extra = (Fraction(0),) * (nvars - self.nvars)
        return MonomialFn(nvars, tuple((c, e + extra) for c, e in self.terms))

    def shift(self, offset: int) -> "MonomialFn":
        """Prepend ``offset`` unused variables (for products)."""
        lead = (Fraction(0),) * offset
        return MonomialFn(self.nvars + offset, tuple((c, lead + e) for c, e in self.terms))

    def valuation_forms(self) -> list[tuple[Fraction, Exps]]:
        """Linear forms whose minimum is the valuation at a positive point."""
        return [(Fraction(valuation(c)), e) for c, e in self.terms]

    def bounds_on_box(self, box: Sequence[tuple[PuiseuxScalar, PuiseuxScalar]]):
        """Certified (lower, upper) scalars for the function over a box.

        Monomials are monotone in each coordinate on the positive orthant, so
        each term's extremes sit at box corners.
        """
        lo_total, hi_total = ZERO, ZERO
        for coef, exps in self.terms:
            lo_t, hi_t = coef, coef
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                a, b = box[i]
                if a.sign() < 0:
                    raise ClassViolation("monomial variables must be nonnegative")
                if e < 0 and a.is_zero():
                    raise ClassViolation(f"x{i + 1}^({e}) is unbounded near x{i + 1} = 0")
                small, large = (a, b) if e > 0 else (b, a)
                lo_t = lo_t * power_bounds(small, e)[0]
                hi_t = hi_t * power_bounds(large, e)[1]
            if coef.sign() < 0:
                lo_t, hi_t = hi_t, lo_t
            lo_total = lo_total + lo_t
            hi_total = hi_total + hi_t
        return lo_total, hi_total

    def standard(self) -> tuple[tuple[Fraction, Exps], ...]:
        """Coefficientwise standard part, dropping infinitesimal terms."""
        out = []
        for coef, exps in self.terms:
            v = valuation(coef)
            if v < 0:
                raise NoStdInterior("coefficient is not finite")
            if v == 0:
                out.append((standard_part(coef), exps))
        return tuple(out)

    def __str__(self) -> str:
        from .dsl import format_mexpr

        return format_mexpr(self)


@dataclass(frozen=True)
class Coord:
    low: MonomialFn
    thick: MonomialFn | None = None  # None: thin coordinate

    @property
    def is_thin(self) -> bool:
        return self.thick is None

    def is_constant(self) -> bool:
        return self.low.is_constant() and (self.thick is None or self.thick.is_constant())


def thick_coord(low: MonomialFn, thick: MonomialFn) -> Coord:
    if thick.is_zero():
        return Coord(low, None)
    if not thick.is_posynomial():
        raise ClassViolation("thickness must be a posynomial with positive coefficients")
    return Coord(low, thick)


@dataclass(frozen=True)
class MonomialCell:
    coords: tuple[Coord, ...]

    def __post_init__(self):
        for k, c in enumerate(self.coords):
            if c.low.nvars != k or (c.thick is not None and c.thick.nvars != k):
                raise ClassViolation(f"coordinate {k + 1} bounds use the wrong variables")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_open(self) -> bool:
        return all(not c.is_thin for c in self.coords)

    def is_box(self) -> bool:
        return all(c.is_constant() for c in self.coords)

    def bounding_box(self) -> list[tuple[PuiseuxScalar, PuiseuxScalar]]:
        box: list[tuple[PuiseuxScalar, PuiseuxScalar]] = []
        for c in self.coords:
            lo_f, hi_f = c.low.bounds_on_box(box)
            if c.thick is not None:
                hi_f = hi_f + c.thick.bounds_on_box(box)[1]
            box.append((lo_f, hi_f))
        return box

    def check_unit(self) -> None:
        """Raise OutOfRange unless the cell verifiably lies in [0,1]^n."""
        for k, (a, b) in enumerate(self.bounding_box()):
            if a.sign() < 0 or b.compare(ONE) > 0:
                raise OutOfRange(f"coordinate {k + 1} leaves [0,1]: bounds [{a}, {b}]")

    def in_unit(self) -> bool:
        try:
            self.check_unit()
        except (OutOfRange, ClassViolation):
            return False
        return True


@dataclass(frozen=True)
class DefinableSet:
    cells: tuple[MonomialCell, ...]
    dim: int

    def __post_init__(self):
        if self.dim > MAX_DIM:
            raise ClassViolation(f"dimension {self.dim} exceeds the cap {MAX_DIM}")
        for c in self.cells:
            if c.dim != self.dim:
                raise ClassViolation("cells of a set must share the dimension")
        boxes = [c for c in self.cells if c.is_box() and c.is_open()]
        for b1, b2 in itertools.combinations(boxes, 2):
            if _boxes_overlap(b1, b2):
                raise ClassViolation("full-dimensional cells overlap")

    @classmethod
    def of(cls, *cells: MonomialCell) -> "DefinableSet":
        if not cells:
            raise ValueError("use DefinableSet((), dim) for the empty set")
        return cls(tuple(cells), cells[0].dim)

    def bounding_box(self):
        boxes = [c.bounding_box() for c in self.cells]
        out = []
        for i in range(self.dim):
            lo = min((b[i][0] for b in boxes), key=_key)
            hi = max((b[i][1] for b in boxes), key=_key)
            out.append((lo, hi))
        return out

    def check_unit(self) -> None:
        for c in self.cells:
            c.check_unit()


class _key:
    def __init__(self, x: PuiseuxScalar):
        self.x = x

    def __lt__(self, other):
        return self.x.compare(other.x) < 0


def _boxes_overlap(b1: MonomialCell, b2: MonomialCell) -> bool:
    for c1, c2 in zip(b1.coords, b2.coords):
        a1 = c1.low.constant_value()
        a2 = c2.low.constant_value()
        e1 = a1 + c1.thick.constant_value()
        e2 = a2 + c2.thick.constant_value()
        if e1.compare(a2) <= 0 or e2.compare(a1) <= 0:
            return False
    return True


def make_box(bounds: Iterable[tuple], *, unit: bool = False) -> MonomialCell:
    coords = []
    for k, (a, b) in enumerate(bounds):
        a, b = PuiseuxScalar.coerce(a), PuiseuxScalar.coerce(b)
        if a.compare(b) > 0:
            raise OutOfRange(f"empty side [{a}, {b}]")
        if unit and (a.sign() < 0 or b.compare(ONE) > 0):
            raise OutOfRange(f"side [{a}, {b}] leaves [0,1]")
        low = MonomialFn.const(a, k)
        coords.append(Coord(low, None) if a == b else Coord(low, MonomialFn.const(b - a, k)))
    return MonomialCell(tuple(coords))


def make_cell(base: MonomialCell | None, low: MonomialFn, thick: MonomialFn) -> MonomialCell:
    coords = base.coords if base is not None else ()
    n = len(coords)
    return MonomialCell(coords + (thick_coord(low.pad(n), thick.pad(n)),))


def box_sides(cell: MonomialCell) -> list[tuple[PuiseuxScalar, PuiseuxScalar]]:
    if not cell.is_box():
        raise ValueError("not a box")
    out = []
    for c in cell.coords:
        a = c.low.constant_value()
        out.append((a, a if c.thick is None else a + c.thick.constant_value()))
    return out


def has_interior(X: DefinableSet) -> bool:
    return any(c.is_open() for c in X.cells)


def cell_has_std_interior(cell: MonomialCell) -> bool:
    for c in cell.coords:
        if c.thick is None:
            return False
        if not any(valuation(coef) == 0 for coef, _ in c.thick.terms):
            return False
    return True


def has_std_interior(X: DefinableSet) -> bool:
    return any(cell_has_std_interior(c) for c in X.cells)


@dataclass(frozen=True)
class StdCell:
    """Real cell with rational-coefficient posynomial bounds."""

    coords: tuple[tuple[tuple, tuple], ...]  # per coordinate: (low terms, thick terms)

    @property
    def dim(self) -> int:
        return len(self.coords)


def std_part(X: DefinableSet) -> list[StdCell]:
    out = []
    for cell in X.cells:
        if not cell_has_std_interior(cell):
            continue
        out.append(StdCell(tuple((c.low.standard(), c.thick.standard()) for c in cell.coords)))
    if not out:
        raise NoStdInterior("the standard part has empty interior")
    return out


def product_cells(a: MonomialCell, b: MonomialCell) -> MonomialCell:
    m = a.dim
    shifted = tuple(
        Coord(c.low.shift(m), None if c.thick is None else c.thick.shift(m)) for c in b.coords
    )
    return MonomialCell(a.coords + shifted)


def product(X: DefinableSet, Y: DefinableSet) -> DefinableSet:
    return DefinableSet(
        tuple(product_cells(a, b) for a in X.cells for b in Y.cells), X.dim + Y.dim
    )


def union(*sets: DefinableSet) -> DefinableSet:
    dims = {s.dim for s in sets}
    if len(dims) != 1:
        raise ClassViolation("union of sets of different dimension")
    return DefinableSet(tuple(c for s in sets for c in s.cells), dims.pop())


def split_coordinate(cell: MonomialCell, i: int, points: Sequence[PuiseuxScalar]) -> list[MonomialCell]:
    """Cut a constant-bounded coordinate at interior points (axis cuts)."""
    c = cell.coords[i]
    if not c.is_constant() or c.thick is None:
        raise UnsupportedImage(f"coordinate {i + 1} is not a constant-bounded thick coordinate")
    a = c.low.constant_value()
    b = a + c.thick.constant_value()
    pts = sorted({PuiseuxScalar.coerce(p) for p in points}, key=_key)
    for p in pts:
        if not (a.compare(p) < 0 < b.compare(p)):
            raise OutOfRange(f"cut point {p} is not inside ({a}, {b})")
    edges = [a] + pts + [b]
    out = []
    for lo, hi in zip(edges, edges[1:]):
        coords = list(cell.coords)
        coords[i] = Coord(MonomialFn.const(lo, i), MonomialFn.const(hi - lo, i))
        out.append(MonomialCell(tuple(coords)))
    return out


def _valuation_pieces(a: PuiseuxScalar, b: PuiseuxScalar, step: Fraction, cap: Fraction):
    """Split (a, b), 0 <= a < b, at points t^s and t^s/2 on the step grid.

    Yields (lo, hi, vmin, vmax): every point of the piece has valuation in
    [vmin, vmax].
    """
    s0 = Fraction(valuation(b))
    va = valuation(a)
    marks = [(b, s0)]
    half = b * PuiseuxScalar.const(Fraction(1, 2))
    if half.compare(a) > 0:
        marks.append((half, s0))
    s = (s0 // step + 1) * step
    while s <= cap and s < va:
        p = PuiseuxScalar.monomial(1, s)
        if p.compare(a) <= 0:
            break
        marks.append((p, s))
        ph = PuiseuxScalar.monomial(Fraction(1, 2), s)
        if ph.compare(a) > 0:
            marks.append((ph, s))
        s += step
    pieces = []
    for (hi, v_hi), (lo, v_lo) in zip(marks, marks[1:]):
        pieces.append((lo, hi, v_hi, v_lo))
    lo_v = va if va != float("inf") else float("inf")
    pieces.append((a, marks[-1][0], marks[-1][1], lo_v))
    return pieces


def _thickness_pieces(cell: MonomialCell, k: int, gamma, step, cap):
    gamma, step, cap = Fraction(gamma), Fraction(step), Fraction(cap)
    coord = cell.coords[k]
    if coord.thick is None:
        raise ClassViolation(f"coordinate {k + 1} is thin")
    h = coord.thick
    base = cell.coords[:k]
    used = [i for i in range(k) if h.depends_on(i)]
    choices = []
    for i in used:
        ci = base[i]
        if not ci.is_constant() or ci.thick is None:
            raise UnsupportedImage(f"base coordinate {i + 1} is not constant-bounded")
        a = ci.low.constant_value()
        b = a + ci.thick.constant_value()
        if a.sign() < 0:
            raise OutOfRange("base coordinate must be nonnegative")
        choices.append(_valuation_pieces(a, b, step, cap))
    forms = h.valuation_forms()
    for combo in itertools.product(*choices):
        corners = list(itertools.product(*[(p[2], p[3]) for p in combo]))

        def holds(form):
            const, exps = form
            for corner in corners:
                val = const
                for idx, i in enumerate(used):
                    e = exps[i]
                    if e == 0:
                        continue
                    w = corner[idx]
                    if w == float("inf"):
                        if e > 0:
                            return False
                        continue
                    val += e * w
                if val > gamma:
                    return False
            return True

        coords = list(cell.coords)
        for (lo, hi, _, _), i in zip(combo, used):
            coords[i] = Coord(MonomialFn.const(lo, i), MonomialFn.const(hi - lo, i))
        yield any(holds(f) for f in forms), coords


def restrict_by_thickness_level(
    cell: MonomialCell, k: int, gamma, step=Fraction(1, 8), cap=Fraction(16)
) -> DefinableSet:
    """Subcells of the base of coordinate ``k`` on which v(thick_k) <= gamma.

    Base coordinates the thickness depends on are cut at monomial points; a
    grid piece is kept when a single term of the thickness satisfies the
    valuation bound at every corner of the piece's valuation box, which by
    linearity means on the whole piece.  The result is an inner approximation
    that grows with ``gamma``.
    """
    cells = [MonomialCell(tuple(coords[:k])) for ok, coords in _thickness_pieces(cell, k, gamma, step, cap) if ok]
    return DefinableSet(tuple(cells), k)


def split_by_thickness_level(
    cell: MonomialCell, k: int, gamma, step=Fraction(1, 8), cap=Fraction(16)
) -> tuple[DefinableSet, DefinableSet]:
    """Partition ``cell`` into the part over ``restrict_by_thickness_level`` and the rest."""
    inside, outside = [], []
    for ok, coords in _thickness_pieces(cell, k, gamma, step, cap):
        (inside if ok else outside).append(MonomialCell(tuple(coords)))
    return DefinableSet(tuple(inside), cell.dim), DefinableSet(tuple(outside), cell.dim)
