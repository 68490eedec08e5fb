"""Surface syntax for scalars, monomial expressions, sets and maps.

Scalars::

    3/2*t^(1/2) + t^2        t - t        (1 + t)*t^(-1)

Sets::

    box [0,t] x [0,t^(1/2)]
    cell base=box [0,t]; low=0; thick=x1
    union(box [0,1/2], box [1/2,1])
    product(box [0,t], cell base=box [0,1]; low=0; thick=x1)

Maps, one step per line (``#`` starts a comment)::

    shear 2 x1          # x2 -> x2 + x1
    shear 2 - x1        # x2 -> x2 - x1
    diag (t, t^(-1))
    translate (1/4, t)
    swap 1 2

Printing is canonical: ``parse_set(format_set(X)) == X``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ClassViolation, DslSyntaxError, MeasureError
from .puiseux import ONE, ZERO, PuiseuxScalar, format_scalar, monomial_power
from .sets import (
    Coord,
    DefinableSet,
    MonomialCell,
    MonomialFn,
    make_box,
    product,
    thick_coord,
    union,
)
from .transforms import AffineMap, IsoPipeline, ShearMap, Swap

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<name>[A-Za-z_]+)|(?P<op>[-+*/^()\[\],;=]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | var | name | op | end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        if text[i] == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise DslSyntaxError(f"unexpected character {text[i]!r}", pos=i)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind)))
        i = m.end()
    out.append(Token("end", "", n))
    return out


# Polynomials in t and x_i with rational exponents, keyed by the sorted
# tuple of (variable index, exponent) pairs; coefficients are scalars.


class _Poly:
    __slots__ = ("terms", "has_sub")

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def scalar(cls, c: PuiseuxScalar) -> "_Poly":
        return cls({(): c})

    @classmethod
    def var(cls, i: int) -> "_Poly":
        return cls({((i, Fraction(1)),): ONE})

    @property
    def has_vars(self) -> bool:
        return any(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return _Poly(out)

    def __neg__(self):
        return _Poly({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = _mono_mul(k1, k2)
                out[k] = out.get(k, ZERO) + v1 * v2
        return _Poly(out)

    def monomial_inverse(self, pos: int) -> "_Poly":
        if len(self.terms) != 1:
            raise DslSyntaxError("division only by a single-term expression", pos=pos)
        (k, c), = self.terms.items()
        if not c.is_monomial():
            raise DslSyntaxError("division only by a single-term expression", pos=pos)
        return _Poly({tuple((i, -e) for i, e in k): ONE / c})

    def power(self, q: Fraction, pos: int) -> "_Poly":
        if q.denominator == 1 and q >= 0:
            out = _Poly.scalar(ONE)
            for _ in range(int(q)):
                out = out * self
            return out
        if len(self.terms) == 1:
            (k, c), = self.terms.items()
            if c.is_monomial() and c.sign() > 0:
                cq = monomial_power(c, q)
                if isinstance(cq, PuiseuxScalar):
                    return _Poly({tuple((i, e * q) for i, e in k if e * q != 0): cq})
        raise DslSyntaxError("fractional or negative powers apply to t or a variable", pos=pos)

    def scalar_value(self, pos: int) -> PuiseuxScalar:
        if self.has_vars:
            raise DslSyntaxError("expected a scalar, found variables", pos=pos)
        return self.terms.get((), ZERO)

    def to_fn(self, nvars: int, pos: int) -> MonomialFn:
        terms = []
        for k, c in self.terms.items():
            exps = [Fraction(0)] * nvars
            for i, e in k:
                if i >= nvars:
                    raise DslSyntaxError(
                        f"x{i + 1} is not available here (only x1..x{nvars})" if nvars else
                        f"x{i + 1} is not available here (no variables)",
                        pos=pos,
                    )
                exps[i] = e
            terms.append((c, tuple(exps)))
        try:
            return MonomialFn(nvars, tuple(terms))
        except ClassViolation as e:
            raise ClassViolation(e.message, pos=pos) from None


def _mono_mul(a, b):
    d: dict = {}
    for i, e in a + b:
        d[i] = d.get(i, Fraction(0)) + e
    return tuple(sorted((i, e) for i, e in d.items() if e != 0))


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "name") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            got = self.tok.text or "end of input"
            raise DslSyntaxError(f"expected {text!r}, found {got!r}", pos=self.tok.pos)
        return self.next()

    def done(self):
        if self.tok.kind != "end":
            raise DslSyntaxError(f"unexpected {self.tok.text!r}", pos=self.tok.pos)

    # expressions

    def expr(self) -> _Poly:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.next()
            right = self.term()
            if op.text == "+":
                left = left + right
            else:
                if right.has_vars:
                    raise ClassViolation("subtracting variable terms leaves the posynomial class", pos=op.pos)
                left = left + (-right)
        return left

    def term(self) -> _Poly:
        left = self.unary()
        while self.at("*") or self.at("/"):
            op = self.next()
            right = self.unary()
            left = left * right if op.text == "*" else left * right.monomial_inverse(op.pos)
        return left

    def unary(self) -> _Poly:
        if self.at("-"):
            op = self.next()
            inner = self.unary()
            if inner.has_vars:
                raise ClassViolation("negated variable terms leave the posynomial class", pos=op.pos)
            return -inner
        return self.power()

    def power(self) -> _Poly:
        start = self.tok.pos
        base = self.atom()
        if self.at("^"):
            self.next()
            q = self.exponent()
            base = base.power(q, start)
        return base

    def exponent(self) -> Fraction:
        if self.tok.kind == "num":
            return Fraction(int(self.next().text))
        self.expect("(")
        q = self.rational(signed=True)
        self.expect(")")
        return q

    def rational(self, signed=False) -> Fraction:
        neg = False
        if signed and self.at("-"):
            self.next()
            neg = True
        t = self.tok
        if t.kind != "num":
            raise DslSyntaxError("expected an integer", pos=t.pos)
        self.next()
        q = Fraction(int(t.text))
        if self.at("/"):
            self.next()
            d = self.tok
            if d.kind != "num":
                raise DslSyntaxError("expected a denominator", pos=d.pos)
            self.next()
            if int(d.text) == 0:
                raise DslSyntaxError("zero denominator", pos=d.pos)
            q = q / int(d.text)
        return -q if neg else q

    def atom(self) -> _Poly:
        t = self.tok
        if t.kind == "num":
            self.next()
            return _Poly.scalar(PuiseuxScalar.const(int(t.text)))
        if t.kind == "var":
            self.next()
            idx = int(t.text[1:])
            if idx < 1:
                raise DslSyntaxError("variables are numbered from x1", pos=t.pos)
            return _Poly.var(idx - 1)
        if t.kind == "name" and t.text == "t":
            self.next()
            return _Poly.scalar(PuiseuxScalar.monomial(1, 1))
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        raise DslSyntaxError(f"unexpected {t.text or 'end of input'!r}", pos=t.pos)

    def scalar(self) -> PuiseuxScalar:
        pos = self.tok.pos
        return self.expr().scalar_value(pos)

    # sets

    def set(self) -> DefinableSet:
        t = self.tok
        if self.at("("):
            self.next()
            s = self.set()
            self.expect(")")
            return s
        if self.at("box"):
            return self.box()
        if self.at("cell"):
            return self.cell()
        if self.at("union") or self.at("product"):
            self.next()
            self.expect("(")
            parts = [self.set()]
            while self.at(","):
                self.next()
                parts.append(self.set())
            self.expect(")")
            try:
                if t.text == "union":
                    return union(*parts)
                out = parts[0]
                for p in parts[1:]:
                    out = product(out, p)
                return out
            except MeasureError as e:
                raise type(e)(e.message, pos=t.pos) from None
        raise DslSyntaxError(f"expected a set, found {t.text or 'end of input'!r}", pos=t.pos)

    def box(self) -> DefinableSet:
        start = self.expect("box").pos
        sides = [self.side()]
        while self.tok.kind == "name" and self.tok.text == "x":
            self.next()
            sides.append(self.side())
        try:
            return DefinableSet.of(make_box(sides))
        except MeasureError as e:
            raise type(e)(e.message, pos=start) from None

    def side(self):
        self.expect("[")
        a = self.scalar()
        self.expect(",")
        b = self.scalar()
        self.expect("]")
        return a, b

    def cell(self) -> DefinableSet:
        start = self.expect("cell").pos
        self.expect("base")
        self.expect("=")
        base = self.set()
        n = base.dim
        self.expect(";")
        self.expect("low")
        self.expect("=")
        lp = self.tok.pos
        low = self.expr().to_fn(n, lp)
        self.expect(";")
        self.expect("thick")
        self.expect("=")
        tp = self.tok.pos
        thick = self.expr().to_fn(n, tp)
        try:
            coord = thick_coord(low, thick)
        except ClassViolation as e:
            raise ClassViolation(e.message, pos=tp) from None
        try:
            cells = tuple(MonomialCell(b.coords + (coord,)) for b in base.cells)
            return DefinableSet(cells, n + 1)
        except MeasureError as e:
            raise type(e)(e.message, pos=start) from None

    # maps

    def map_step(self):
        t = self.tok
        if self.at("shear"):
            self.next()
            k = self.index()
            sign = 1
            if self.at("-"):
                self.next()
                sign = -1
            fp = self.tok.pos
            f = self.expr().to_fn(k, fp)
            return ShearMap(k, f, sign)
        if self.at("diag") or self.at("translate"):
            self.next()
            vals = self.tuple_()
            try:
                if t.text == "diag":
                    return AffineMap.diag(*vals)
                return AffineMap.translate(*vals)
            except ValueError as e:
                raise DslSyntaxError(str(e), pos=t.pos) from None
        if self.at("swap"):
            self.next()
            i = self.index()
            j = self.index()
            return Swap(i, j)
        raise DslSyntaxError(f"expected a map step, found {t.text or 'end of input'!r}", pos=t.pos)

    def index(self) -> int:
        t = self.tok
        if t.kind != "num" or int(t.text) < 1:
            raise DslSyntaxError("expected a coordinate number (from 1)", pos=t.pos)
        self.next()
        return int(t.text) - 1

    def tuple_(self):
        self.expect("(")
        vals = [self.scalar()]
        while self.at(","):
            self.next()
            vals.append(self.scalar())
        self.expect(")")
        return vals


def parse_scalar(text: str) -> PuiseuxScalar:
    p = Parser(text)
    v = p.scalar()
    p.done()
    return v


def parse_mexpr(text: str, nvars: int) -> MonomialFn:
    p = Parser(text)
    pos = p.tok.pos
    f = p.expr().to_fn(nvars, pos)
    p.done()
    return f


def parse_set(text: str) -> DefinableSet:
    p = Parser(text)
    s = p.set()
    p.done()
    return s


def parse_map(text: str) -> IsoPipeline:
    steps = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            p = Parser(body)
            try:
                steps.append(p.map_step())
                p.done()
            except MeasureError as e:
                raise type(e)(e.message, pos=None if e.pos is None else e.pos + offset) from None
        offset += len(line)
    return IsoPipeline(tuple(steps))


# printing


def _coef_text(c: PuiseuxScalar) -> str:
    s = format_scalar(c)
    return f"({s})" if len(c.terms) > 1 or s.startswith("-") else s


def _exp_text(e: Fraction) -> str:
    return str(e) if e.denominator == 1 and e > 0 else f"({e})"


def format_mexpr(fn: MonomialFn) -> str:
    if fn.is_zero():
        return "0"
    parts = []
    for coef, exps in fn.terms:
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e != 0:
                factors.append(f"x{i + 1}^{_exp_text(e)}")
        if not factors:
            parts.append(format_scalar(coef))
        elif coef == ONE:
            parts.append("*".join(factors))
        else:
            parts.append("*".join([_coef_text(coef)] + factors))
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _format_cell(cell: MonomialCell) -> str:
    if cell.is_box():
        sides = []
        for c in cell.coords:
            a = c.low.constant_value()
            b = a if c.thick is None else a + c.thick.constant_value()
            sides.append(f"[{format_scalar(a)},{format_scalar(b)}]")
        return "box " + " x ".join(sides)
    base = MonomialCell(cell.coords[:-1])
    last = cell.coords[-1]
    thick = "0" if last.thick is None else format_mexpr(last.thick)
    return f"cell base=({_format_cell(base)}); low={format_mexpr(last.low)}; thick={thick}"


def format_set(X: DefinableSet) -> str:
    if len(X.cells) == 1:
        return _format_cell(X.cells[0])
    if not X.cells:
        raise ValueError("the empty set has no surface syntax")
    return "union(" + ", ".join(_format_cell(c) for c in X.cells) + ")"


def format_map_step(step) -> str:
    if isinstance(step, ShearMap):
        sign = "- " if step.sign < 0 else ""
        return f"shear {step.k + 1} {sign}{format_mexpr(step.f)}"
    if isinstance(step, Swap):
        return f"swap {step.i + 1} {step.j + 1}"
    if isinstance(step, AffineMap):
        if all(b.is_zero() for b in step.translation):
            return "diag (" + ", ".join(format_scalar(x) for x in step.diagonal) + ")"
        if all(d == ONE for d in step.diagonal):
            return "translate (" + ", ".join(format_scalar(x) for x in step.translation) + ")"
        return "\n".join(
            [
                "diag (" + ", ".join(format_scalar(x) for x in step.diagonal) + ")",
                "translate ("
                + ", ".join(format_scalar(b / d) for b, d in zip(step.translation, step.diagonal))
                + ")",
            ]
        )
    raise TypeError(f"not a map step: {step!r}")


def format_map(pipe: IsoPipeline) -> str:
    return "".join(format_map_step(s) + "\n" for s in pipe.steps)
