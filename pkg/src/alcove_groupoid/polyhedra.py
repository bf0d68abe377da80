"""Exact rational polyhedral primitives.

Constraints are triples ``(a, b, strict)`` meaning ``a.y + b > 0`` when
``strict`` else ``a.y + b >= 0``.  Everything runs on :class:`Fraction`.

Two independent engines live here: Fourier-Motzkin elimination (used by the
arrangement code, also returns a witness point) and a dense two-phase simplex
(used only as a cross-check oracle).
"""
from __future__ import annotations

from fractions import Fraction
import math
from math import gcd
from typing import Iterable, Optional, Sequence

Constraint = tuple[tuple[Fraction, ...], Fraction, bool]

ZERO = Fraction(0)
ONE = Fraction(1)


def _normalize(c: Constraint) -> Constraint:
    a, b, strict = c
    nz = [x for x in a if x != 0]
    if not nz:
        return (a, b, strict)
    scale = abs(nz[0])
    return (tuple(x / scale for x in a), b / scale, strict)


def _dedupe(cs: Iterable[Constraint]) -> list[Constraint]:
    best: dict[tuple, Constraint] = {}
    for c in cs:
        c = _normalize(c)
        key = c[0]
        # among parallel constraints with the same normal keep the tightest
        prev = best.get(key)
        if prev is None:
            best[key] = c
            continue
        if c[1] < prev[1] or (c[1] == prev[1] and c[2] and not prev[2]):
            best[key] = c
    return list(best.values())


def fm_solve(constraints: Sequence[Constraint], dim: int) -> Optional[tuple[Fraction, ...]]:
    """Point satisfying all constraints, or None if the system is infeasible.

    Fourier-Motzkin elimination of the last coordinate, repeated, then back
    substitution taking the midpoint of each feasible interval.
    """
    cs = [(tuple(Fraction(x) for x in a), Fraction(b), bool(s)) for a, b, s in constraints]
    for a, _, _ in cs:
        if len(a) != dim:
            raise ValueError("constraint dimension mismatch")
    levels: list[list[Constraint]] = []
    current = _dedupe(cs)
    for k in range(dim - 1, -1, -1):
        levels.append(current)
        pos, neg, rest = [], [], []
        for c in current:
            (pos if c[0][k] > 0 else neg if c[0][k] < 0 else rest).append(c)
        new = [((c[0][:k]), c[1], c[2]) for c in rest]
        for ap, bp, sp in pos:
            for an, bn, sn in neg:
                # y_k >= -(ap'.y + bp)/ap_k  and  y_k <= (an'.y + bn)/(-an_k)
                wp, wn = -an[k], ap[k]
                a = tuple(wp * ap[i] + wn * an[i] for i in range(k))
                new.append((a, wp * bp + wn * bn, sp or sn))
        current = _dedupe(new)
    for _, b, strict in current:
        if b < 0 or (strict and b == 0):
            return None
    point: list[Fraction] = []
    for k, level in enumerate(reversed(levels)):
        lo, lo_strict, hi, hi_strict = None, False, None, False
        for a, b, strict in level:
            rest = b + sum((a[i] * point[i] for i in range(k)), ZERO)
            if a[k] > 0:
                bound = -rest / a[k]
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
            elif a[k] < 0:
                bound = rest / -a[k]
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
            elif rest < 0 or (strict and rest == 0):
                return None
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (lo_strict or hi_strict)):
                return None
            val = (lo + hi) / 2
        elif lo is not None:
            val = Fraction(math.floor(lo) + 1)
        elif hi is not None:
            val = Fraction(math.ceil(hi) - 1)
        else:
            val = ZERO
        point.append(val)
    return tuple(point)


def fm_feasible(constraints: Sequence[Constraint], dim: int) -> bool:
    return fm_solve(constraints, dim) is not None


def satisfies(point: Sequence[Fraction], constraints: Sequence[Constraint]) -> bool:
    for a, b, strict in constraints:
        v = b + sum((x * y for x, y in zip(a, point)), ZERO)
        if v < 0 or (strict and v == 0):
            return False
    return True


# ---------------------------------------------------------------------------
# dense simplex oracle


def _simplex_max(tab: list[list[Fraction]], basis: list[int], ncols: int) -> bool:
    """Maximize in-place; objective row is the last row. Bland's rule.

    Returns False if unbounded.
    """
    m = len(tab) - 1
    while True:
        obj = tab[m]
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return True
        best, leave = None, None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return False
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(len(tab)):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                row = tab[leave]
                tab[i] = [x - f * y for x, y in zip(tab[i], row)]
        basis[leave] = enter


def lp_maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> Optional[tuple[Fraction, list[Fraction]]]:
    """max c.x s.t. A x <= b with x free.  None if infeasible; raises if unbounded.

    Two-phase dense tableau simplex over the rationals.
    """
    n = len(c)
    m = len(A)
    # x = u - v, u, v >= 0 ; slack s_i ; artificial for rows with b_i < 0
    rows = []
    for i in range(m):
        ai = [Fraction(x) for x in A[i]]
        bi = Fraction(b[i])
        sign = -1 if bi < 0 else 1
        rows.append(([sign * x for x in ai] + [-sign * x for x in ai], sign, sign * bi))
    nvar = 2 * n + m
    art = [i for i in range(m) if rows[i][1] < 0]
    ncols = nvar + len(art)
    tab = []
    basis = []
    for i, (coef, sign, rhs) in enumerate(rows):
        row = coef + [ZERO] * m + [ZERO] * len(art) + [rhs]
        row[2 * n + i] = Fraction(sign)
        if sign < 0:
            k = art.index(i)
            row[nvar + k] = ONE
            basis.append(nvar + k)
        else:
            basis.append(2 * n + i)
        tab.append(row)
    if art:
        obj = [ZERO] * (ncols + 1)
        for k in range(len(art)):
            obj[nvar + k] = ONE
        for i in art:
            obj = [o - x for o, x in zip(obj, tab[i])]
        tab.append(obj)
        _simplex_max(tab, basis, ncols)
        if tab[-1][-1] != 0:
            return None
        tab.pop()
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] >= nvar:
                j = next((j for j in range(nvar) if tab[i][j] != 0), None)
                if j is None:
                    continue
                piv = tab[i][j]
                tab[i] = [x / piv for x in tab[i]]
                for r in range(m):
                    if r != i and tab[r][j] != 0:
                        f = tab[r][j]
                        tab[r] = [x - f * y for x, y in zip(tab[r], tab[i])]
                basis[i] = j
        tab = [row[:nvar] + [row[-1]] for row in tab]
        keep = [i for i in range(m) if basis[i] < nvar]
        tab = [tab[i] for i in keep]
        basis = [basis[i] for i in keep]
    cc = [Fraction(x) for x in c]
    obj = [-x for x in cc] + [x for x in cc] + [ZERO] * m + [ZERO]
    for i, bi in enumerate(basis):
        if obj[bi] != 0:
            f = obj[bi]
            obj = [o - f * x for o, x in zip(obj, tab[i])]
    tab.append(obj)
    if not _simplex_max(tab, basis, nvar):
        raise ArithmeticError("LP unbounded")
    vals = [ZERO] * nvar
    for i, bi in enumerate(basis):
        vals[bi] = tab[i][-1]
    x = [vals[j] - vals[n + j] for j in range(n)]
    return tab[-1][-1], x


def simplex_strictly_feasible(constraints: Sequence[Constraint], dim: int) -> bool:
    """Oracle for :func:`fm_feasible` built on :func:`lp_maximize`.

    Strict rows get a common slack t: maximize t subject to a.y + b >= t
    (strict) or a.y + b >= 0, with t <= 1.
    """
    A, b = [], []
    for a, c0, strict in constraints:
        A.append([-Fraction(x) for x in a] + [ONE if strict else ZERO])
        b.append(Fraction(c0))
    A.append([ZERO] * dim + [ONE])
    b.append(ONE)
    res = lp_maximize([ZERO] * dim + [ONE], A, b)
    if res is None:
        return False
    value, _ = res
    has_strict = any(s for _, _, s in constraints)
    return value > 0 if has_strict else True


# ---------------------------------------------------------------------------
# small exact linear algebra


def rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    r = 0
    ncol = len(m[0])
    for col in range(ncol):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col] / m[r][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def solve_square(A: Sequence[Sequence], b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Unique solution of A x = b, or None if A is singular."""
    n = len(A)
    m = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return tuple(m[i][n] for i in range(n))


def primitive(vec: Sequence[Fraction]) -> tuple[tuple[int, ...], Fraction]:
    """Scale a nonzero rational vector to a primitive integer vector with
    positive leading entry.  Returns (vector, factor) with vec = factor * vector."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    lead = next(x for x in ints if x != 0)
    s = 1 if lead > 0 else -1
    prim = tuple(s * x // g for x in ints)
    return prim, Fraction(s * g, den)
