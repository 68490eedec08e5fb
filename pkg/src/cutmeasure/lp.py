"""Exact linear programming over the rationals for small polyhedra.

Constraints are pairs ``(coeffs, bound)`` meaning ``coeffs . w <= bound``.
All polyhedra handled here carry explicit box bounds, so minima exist
whenever the polyhedron is nonempty.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

Constraint = tuple[tuple[Fraction, ...], Fraction]

_ZERO = Fraction(0)


def normalize(cons, nvars: int) -> tuple[Constraint, ...] | None:
    """Deduplicate and scale constraints; ``None`` if trivially infeasible."""
    best: dict[tuple, Fraction] = {}
    for coeffs, bound in cons:
        coeffs = tuple(Fraction(c) for c in coeffs)
        bound = Fraction(bound)
        if len(coeffs) != nvars:
            raise ValueError(f"constraint has {len(coeffs)} coefficients, expected {nvars}")
        scale = max((abs(c) for c in coeffs), default=_ZERO)
        if scale == 0:
            if bound < 0:
                return None
            continue
        key = tuple(c / scale for c in coeffs)
        b = bound / scale
        if key not in best or b < best[key]:
            best[key] = b
    return tuple(sorted(best.items()))


def _interval(cons) -> tuple[Fraction, Fraction] | None:
    lo, hi = None, None
    for (a,), b in cons:
        v = b / a
        if a > 0:
            hi = v if hi is None or v < hi else hi
        else:
            lo = v if lo is None or v > lo else lo
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def minimize(obj, cons, nvars: int):
    """Minimum of ``obj . w`` over the polyhedron.

    Returns ``None`` if empty and ``-inf`` if unbounded below.
    """
    ncons = normalize(cons, nvars)
    if ncons is None:
        return None
    return _minimize(tuple(Fraction(c) for c in obj), ncons, nvars)


def minimize_normalized(obj: tuple, ncons: tuple, nvars: int):
    """``minimize`` for constraints already passed through ``normalize``."""
    return _minimize(obj, ncons, nvars)


def maximize(obj, cons, nvars: int):
    r = minimize(tuple(-Fraction(c) for c in obj), cons, nvars)
    if r is None:
        return None
    return -r


def feasible(cons, nvars: int) -> bool:
    return minimize((_ZERO,) * nvars, cons, nvars) is not None


@lru_cache(maxsize=200_000)
def _minimize(obj, cons, nvars):
    if nvars == 0:
        return _ZERO
    if nvars == 1:
        iv = _interval(cons)
        if iv is None:
            return None
        lo, hi = iv
        c = obj[0]
        if c == 0:
            return _ZERO
        end = lo if c > 0 else hi
        if end is None:
            return float("-inf")
        return c * end
    return _simplex(obj, cons, nvars)


def _simplex(obj, cons, nvars):
    # Free variables are split as w = u - v; two-phase tableau with Bland's rule.
    nv = 2 * nvars
    rows = []
    rhs = []
    for coeffs, b in cons:
        row = [Fraction(c) for c in coeffs] + [-Fraction(c) for c in coeffs]
        rows.append(row)
        rhs.append(Fraction(b))
    m = len(rows)
    if m == 0:
        return _ZERO if all(c == 0 for c in obj) else float("-inf")
    # columns: structural nv, slacks m, artificials (one per negative rhs row)
    art_rows = [i for i in range(m) if rhs[i] < 0]
    ncol = nv + m + len(art_rows)
    T = []
    basis = []
    for i in range(m):
        line = rows[i] + [_ZERO] * (m + len(art_rows)) + [rhs[i]]
        line[nv + i] = Fraction(1)
        if rhs[i] < 0:
            line = [-x for x in line]
            a = nv + m + art_rows.index(i)
            line[a] = Fraction(1)
            basis.append(a)
        else:
            basis.append(nv + i)
        T.append(line)

    def pivot(r, c):
        pr = T[r]
        pv = pr[c]
        if pv != 1:
            T[r] = pr = [x / pv for x in pr]
        for i in range(m):
            if i != r:
                f = T[i][c]
                if f != 0:
                    Ti = T[i]
                    T[i] = [a - f * b for a, b in zip(Ti, pr)]
        basis[r] = c

    def run(cost, allowed):
        while True:
            # reduced costs
            enter = None
            for j in range(ncol):
                if j not in allowed or j in basis:
                    continue
                rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))
                if rc < 0:
                    enter = j
                    break
            if enter is None:
                return True
            leave, best = None, None
            for i in range(m):
                a = T[i][enter]
                if a > 0:
                    ratio = T[i][-1] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return False
            pivot(leave, enter)

    if art_rows:
        cost1 = [_ZERO] * ncol
        for k in range(len(art_rows)):
            cost1[nv + m + k] = Fraction(1)
        run(cost1, set(range(ncol)))
        if sum(T[i][-1] for i in range(m) if basis[i] >= nv + m) > 0:
            return None
        # drive artificials out of the basis
        for i in range(m):
            if basis[i] >= nv + m:
                for j in range(nv + m):
                    if T[i][j] != 0:
                        pivot(i, j)
                        break
    cost2 = [Fraction(c) for c in obj] + [-Fraction(c) for c in obj] + [_ZERO] * (m + len(art_rows))
    allowed = set(range(nv + m))
    if not run(cost2, allowed):
        return float("-inf")
    return sum(cost2[basis[i]] * T[i][-1] for i in range(m))
