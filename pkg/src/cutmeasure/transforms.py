"""Maps that keep sets inside the cell class, and the invariance harness."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedImage
from .puiseux import ONE, ZERO, PuiseuxScalar, monomial_power, valuation
from .sets import Coord, DefinableSet, MonomialCell, MonomialFn


def _referenced(cell: MonomialCell, i: int) -> bool:
    """True when a later coordinate's bounds depend on coordinate ``i``."""
    for c in cell.coords[i + 1 :]:
        if c.low.depends_on(i) or (c.thick is not None and c.thick.depends_on(i)):
            return True
    return False


def _rescale_fn(fn: MonomialFn, lam) -> MonomialFn:
    """Rewrite ``fn(x)`` in terms of ``y_i = lam_i * x_i``."""
    terms = []
    for coef, exps in fn.terms:
        for i, e in enumerate(exps):
            if e == 0:
                continue
            p = monomial_power(lam[i], -e)
            if not isinstance(p, PuiseuxScalar):
                raise UnsupportedImage(f"({lam[i]})^({-e}) is not a Puiseux scalar")
            coef = coef * p
        terms.append((coef, exps))
    return MonomialFn(fn.nvars, tuple(terms))


@dataclass(frozen=True)
class AffineMap:
    """``y_i = diagonal_i * x_i + translation_i``."""

    diagonal: tuple[PuiseuxScalar, ...]
    translation: tuple[PuiseuxScalar, ...]

    def __post_init__(self):
        diag = tuple(PuiseuxScalar.coerce(x) for x in self.diagonal)
        tr = tuple(PuiseuxScalar.coerce(x) for x in self.translation)
        if len(diag) != len(tr):
            raise ValueError("diagonal and translation lengths differ")
        if any(d.is_zero() for d in diag):
            raise ValueError("diagonal entries must be nonzero")
        object.__setattr__(self, "diagonal", diag)
        object.__setattr__(self, "translation", tr)

    @classmethod
    def diag(cls, *lam) -> "AffineMap":
        return cls(tuple(lam), (ZERO,) * len(lam))

    @classmethod
    def translate(cls, *b) -> "AffineMap":
        return cls((ONE,) * len(b), tuple(b))

    @property
    def dim(self) -> int:
        return len(self.diagonal)

    @property
    def det(self) -> PuiseuxScalar:
        d = ONE
        for x in self.diagonal:
            d = d * x
        return d

    def image_cell(self, cell: MonomialCell) -> MonomialCell:
        lam, b = self.diagonal, self.translation
        if len(lam) != cell.dim:
            raise UnsupportedImage(f"map of dimension {len(lam)} applied to a cell of dimension {cell.dim}")
        coords = []
        for k, c in enumerate(cell.coords):
            if _referenced(cell, k):
                if not b[k].is_zero() or lam[k].sign() < 0:
                    raise UnsupportedImage(
                        f"coordinate {k + 1} feeds later bounds; only positive scaling is allowed"
                    )
            low = _rescale_fn(c.low, lam)
            thick = None if c.thick is None else _rescale_fn(c.thick, lam)
            if lam[k].sign() > 0:
                low = low.scale(lam[k])
                thick = None if thick is None else thick.scale(lam[k])
            else:
                if not c.is_constant():
                    raise UnsupportedImage(f"reflection of coordinate {k + 1} needs constant bounds")
                a = low.constant_value()
                h = ZERO if thick is None else thick.constant_value()
                low = MonomialFn.const((a + h) * lam[k], k)
                thick = None if thick is None else MonomialFn.const(-h * lam[k], k)
            if not b[k].is_zero():
                low = low + MonomialFn.const(b[k], k)
            coords.append(Coord(low, thick))
        return MonomialCell(tuple(coords))

    def __str__(self) -> str:
        from .dsl import format_map_step

        return format_map_step(self)


@dataclass(frozen=True)
class ShearMap:
    """``x_k -> x_k + f(x_1..x_{k-1})`` (``sign = +1``) or its inverse."""

    k: int  # 0-based coordinate
    f: MonomialFn
    sign: int = 1

    def __post_init__(self):
        if self.f.nvars != self.k:
            raise ValueError(f"shear of coordinate {self.k + 1} needs a function of the first {self.k}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def det(self) -> PuiseuxScalar:
        return ONE

    def image_cell(self, cell: MonomialCell) -> MonomialCell:
        k = self.k
        if k >= cell.dim:
            raise UnsupportedImage(f"no coordinate {k + 1}")
        if _referenced(cell, k):
            raise UnsupportedImage(f"coordinate {k + 1} feeds later bounds")
        c = cell.coords[k]
        if self.sign > 0:
            low = c.low + self.f
        else:
            have = dict((e, coef) for coef, e in c.low.terms)
            terms = dict(have)
            for coef, e in self.f.terms:
                if any(e):
                    if e not in have or have[e].compare(coef) < 0:
                        raise UnsupportedImage("inverse shear does not cancel into a posynomial")
                terms[e] = terms.get(e, ZERO) - coef
            low = MonomialFn(k, tuple((coef, e) for e, coef in terms.items()))
        coords = list(cell.coords)
        coords[k] = Coord(low, c.thick)
        return MonomialCell(tuple(coords))

    def __str__(self) -> str:
        from .dsl import format_map_step

        return format_map_step(self)


@dataclass(frozen=True)
class Swap:
    """Transposition of coordinates ``i`` and ``j`` (0-based)."""

    i: int
    j: int

    @property
    def det(self) -> PuiseuxScalar:
        # orientation is irrelevant to measure; |det| = 1
        return ONE

    def image_cell(self, cell: MonomialCell) -> MonomialCell:
        if max(self.i, self.j) >= cell.dim:
            raise UnsupportedImage(f"no coordinate {max(self.i, self.j) + 1}")
        if not cell.is_box():
            raise UnsupportedImage("transpositions act on boxes only")
        sides = []
        for c in cell.coords:
            sides.append((c.low.constant_value(), None if c.thick is None else c.thick.constant_value()))
        sides[self.i], sides[self.j] = sides[self.j], sides[self.i]
        coords = []
        for k, (a, h) in enumerate(sides):
            coords.append(Coord(MonomialFn.const(a, k), None if h is None else MonomialFn.const(h, k)))
        return MonomialCell(tuple(coords))

    def __str__(self) -> str:
        from .dsl import format_map_step

        return format_map_step(self)


@dataclass(frozen=True)
class IsoPipeline:
    steps: tuple = ()

    @property
    def det(self) -> PuiseuxScalar:
        d = ONE
        for s in self.steps:
            d = d * s.det
        return d

    @property
    def unit(self) -> bool:
        d = self.det
        return d == ONE or d == -ONE

    def __str__(self) -> str:
        from .dsl import format_map

        return format_map(self)


def apply(pipe, X: DefinableSet) -> DefinableSet:
    steps = pipe.steps if isinstance(pipe, IsoPipeline) else (pipe,)
    for step in steps:
        X = DefinableSet(tuple(step.image_cell(c) for c in X.cells), X.dim)
    return X


def _same(a, b) -> str:
    if a == b:
        return "equal"
    if a.is_std and b.is_std and a.size.overlaps(b.size):
        return "indistinguishable"
    return "different"


def check_invariance(pipe: IsoPipeline, X: DefinableSet, config=None) -> dict:
    """Compare the measure of ``X`` with that of its image.

    Unit maps must preserve the measure.  Other maps are accepted when their
    determinant is a standard positive size, in which case the image must
    measure ``Std(|det|) * mu(X)``.
    """
    from .measure import measure_sb
    from .semiring import Std, v_mul

    Y = apply(pipe, X)
    lhs = measure_sb(X, config)
    rhs = measure_sb(Y, config)
    det = pipe.det
    if pipe.unit:
        expected = lhs
    else:
        if valuation(det) != 0:
            raise UnsupportedImage("non-unit maps need a determinant of standard size")
        d = det if det.sign() > 0 else -det
        expected = v_mul(Std(d.coefficient(0)), lhs)
    status = _same(expected, rhs)
    return {
        "unit": pipe.unit,
        "det": det,
        "measure": lhs,
        "image_measure": rhs,
        "expected": expected,
        "status": status,
        "ok": status != "different",
    }
