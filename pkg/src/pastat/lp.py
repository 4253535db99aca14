"""Exact two-phase simplex method with Bland's anti-cycling rule."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .rational import Rational, RVec, dot, rat, vec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    """Maximize <objective, x> subject to <a, x> <= b (ineqs) and <a, x> = b (eqs).

    The variables x are free.
    """

    objective: RVec
    ineqs: tuple = ()
    eqs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "objective", vec(self.objective))
        object.__setattr__(self, "ineqs", tuple((vec(a), rat(b)) for a, b in self.ineqs))
        object.__setattr__(self, "eqs", tuple((vec(a), rat(b)) for a, b in self.eqs))
        d = len(self.objective)
        for a, _ in self.ineqs + self.eqs:
            if len(a) != d:
                raise ValueError(f"constraint row of length {len(a)} in a {d}-dimensional LP")

    @property
    def dim(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpResult:
    status: str
    point: RVec | None = None
    value: Rational | None = None
    # Infeasible: multipliers z (ineqs first, then eqs) with z_ineq >= 0,
    # sum z_r a_r = 0 and sum z_r b_r < 0.
    farkas: tuple | None = None
    # Unbounded: a direction r with <c, r> > 0 and <a, r> <= 0 (= 0 for eqs).
    ray: RVec | None = None
    pivots: int = field(default=0, compare=False)


class _Tableau:
    def __init__(self, rows: list[list], rhs: list, basis: list[int], ncols: int):
        self.t = [r + [b] for r, b in zip(rows, rhs)]
        self.basis = basis
        self.ncols = ncols
        self.obj: list = []
        self.pivots = 0

    def set_objective(self, cost: Sequence):
        obj = list(cost) + [mpq(0)]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.t[i]
                obj = [o - cb * x for o, x in zip(obj, row)]
        self.obj = obj

    def pivot(self, r: int, c: int):
        row = self.t[r]
        inv = 1 / row[c]
        row = [x * inv for x in row]
        self.t[r] = row
        nz = [j for j, b in enumerate(row) if b]
        for i, other in enumerate(self.t):
            if i != r:
                f = other[c]
                if f:
                    for j in nz:
                        other[j] -= f * row[j]
        f = self.obj[c]
        if f:
            for j in nz:
                self.obj[j] -= f * row[j]
        self.basis[r] = c
        self.pivots += 1

    def run(self, allowed: int) -> int | None:
        """Maximize with Bland's rule over columns < allowed.

        Returns None at optimality, else the unbounded entering column.
        """
        while True:
            enter = next((j for j in range(allowed) if self.obj[j] > 0), None)
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.t):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            self.pivot(best[1], enter)


def lp_solve(p: LpProblem) -> LpResult:
    n = p.dim
    rows_src = list(p.ineqs) + list(p.eqs)
    m_in = len(p.ineqs)
    m = len(rows_src)
    # Columns: x+ (n), x- (n), slacks (m_in), artificials (m).
    ncols = 2 * n + m_in + m
    art0 = 2 * n + m_in
    rows, rhs, signs = [], [], []
    for r, (a, b) in enumerate(rows_src):
        sgn = -1 if b < 0 else 1
        row = [mpq(0)] * ncols
        for i, ai in enumerate(a):
            row[i] = sgn * ai
            row[n + i] = -sgn * ai
        if r < m_in:
            row[2 * n + r] = mpq(sgn)
        row[art0 + r] = mpq(1)
        rows.append(row)
        rhs.append(sgn * b)
        signs.append(sgn)
    tab = _Tableau(rows, rhs, [art0 + r for r in range(m)], ncols)

    # Phase 1: maximize -(sum of artificials).
    cost1 = [mpq(0)] * art0 + [mpq(-1)] * m
    tab.set_objective(cost1)
    tab.run(ncols)
    phase1 = -tab.obj[-1]
    if phase1 < 0:
        # y_r = c_art - reduced cost of artificial column r.
        y = [mpq(-1) - tab.obj[art0 + r] for r in range(m)]
        z = tuple(y[r] * signs[r] for r in range(m))
        return LpResult(INFEASIBLE, farkas=z, pivots=tab.pivots)

    # Drive remaining artificials out of the basis; drop redundant rows.
    i = 0
    while i < len(tab.t):
        if tab.basis[i] >= art0:
            c = next((j for j in range(art0) if tab.t[i][j] != 0), None)
            if c is None:
                del tab.t[i]
                del tab.basis[i]
                continue
            tab.pivot(i, c)
        i += 1

    c = p.objective
    cost2 = list(c) + [-x for x in c] + [mpq(0)] * (m_in + m)
    tab.set_objective(cost2)
    enter = tab.run(art0)
    values = [mpq(0)] * ncols
    for i, b in enumerate(tab.basis):
        values[b] = tab.t[i][-1]
    x = tuple(values[i] - values[n + i] for i in range(n))
    if enter is not None:
        dirv = [mpq(0)] * ncols
        dirv[enter] = mpq(1)
        for i, b in enumerate(tab.basis):
            dirv[b] = -tab.t[i][enter]
        ray = tuple(dirv[i] - dirv[n + i] for i in range(n))
        return LpResult(UNBOUNDED, point=x, ray=ray, pivots=tab.pivots)
    return LpResult(OPTIMAL, point=x, value=dot(c, x), pivots=tab.pivots)


def feasible_point(ineqs=(), eqs=(), dim: int | None = None) -> RVec | None:
    """Some point of {x : ineqs, eqs}, or None when empty."""
    if dim is None:
        dim = len((list(ineqs) + list(eqs))[0][0])
    res = lp_solve(LpProblem((0,) * dim, tuple(ineqs), tuple(eqs)))
    return res.point if res.status == OPTIMAL else None
