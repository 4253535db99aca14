"""Exact Euclidean projection of the origin onto polytopes and polyhedra.

``min_norm_vrep`` runs Wolfe's minimum-norm-point algorithm on a finite
point set.  ``min_norm_hrep`` runs the Goldfarb-Idnani dual active-set
method (identity Hessian) on an inequality/equality system, and
``min_norm_hrep_kkt`` is the exhaustive active-set search kept as an
independent reference for small systems.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
from itertools import combinations
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .linalg import rank, solve_int, solve_square
from .lp import OPTIMAL, LpProblem, lp_solve
from .rational import (INF, Rational, RVec, dot, exact_matmul, int_array, max_abs, rat,
                       to_int_rows, vec, zeros)


@dataclass(frozen=True)
class VrepResult:
    point: RVec
    dist_sq: Rational
    coeffs: tuple

    def __iter__(self):
        return iter((self.point, self.dist_sq, self.coeffs))


@dataclass(frozen=True)
class HrepResult:
    status: str
    point: RVec | None
    dist_sq: object
    # Infeasible: multipliers y (ineqs first, then eqs), y_ineq >= 0,
    # sum y_r a_r = 0 and sum y_r b_r < 0.
    farkas: tuple | None = None

    def __iter__(self):
        return iter((self.status, self.point, self.dist_sq))


def _affine_minimizer(gram: list[list[int]]) -> list | None:
    """Weights a with sum 1 minimizing |sum a_i y_i|^2 for an integer Gram matrix."""
    s = len(gram)
    m = [list(row) + [1] for row in gram]
    m.append([1] * s + [0])
    sol = solve_int(m, [0] * s + [1])
    if sol is None:
        return None
    return list(sol[:s])


def wolfe_int(rows: Sequence[Sequence[int]] | None, mat: np.ndarray | None = None):
    """Wolfe's algorithm on integer points.

    Returns (x, corral, weights) with x = sum weights[i] * rows[corral[i]]
    the minimum-norm point of conv(rows).  Either argument may be omitted.
    """
    if mat is None:
        mat = int_array(rows)
    if rows is None:
        rows = mat.tolist()
    rows = [r if isinstance(r, list) else list(r) for r in rows]
    if mat.dtype != object and max_abs(mat) ** 2 * mat.shape[1] < 2**62:
        j0 = int(np.argmin((mat * mat).sum(axis=1)))
    else:
        j0 = min(range(len(rows)), key=lambda j: (sum(a * a for a in rows[j]), j))
    corral = [j0]
    lam = [mpq(1)]
    gram: dict = {}

    def g(i, j):
        key = (i, j) if i <= j else (j, i)
        v = gram.get(key)
        if v is None:
            v = sum(a * b for a, b in zip(rows[i], rows[j]))
            gram[key] = v
        return v

    x = tuple(mpq(a) for a in rows[j0])
    while True:
        den = math.lcm(*(int(a.denominator) for a in x))
        xi = [int(a * den) for a in x]
        nx = sum(a * a for a in xi)
        vals = exact_matmul(mat, int_array([xi]).reshape(-1))
        j = int(np.argmin(vals)) if vals.dtype != object else min(range(len(vals)), key=lambda k: (vals[k], k))
        if int(vals[j]) * den >= nx:
            break
        corral.append(j)
        lam.append(mpq(0))
        while True:
            alpha = _affine_minimizer([[g(a, b) for b in corral] for a in corral])
            if alpha is None:
                raise ArithmeticError("Wolfe corral lost affine independence")
            if all(a > 0 for a in alpha):
                lam = alpha
                break
            theta = min(lam[i] / (lam[i] - alpha[i])
                        for i in range(len(corral)) if alpha[i] <= 0 and lam[i] > alpha[i])
            lam = [(1 - theta) * l + theta * a for l, a in zip(lam, alpha)]
            keep = [i for i in range(len(corral)) if lam[i] > 0]
            corral = [corral[i] for i in keep]
            lam = [lam[i] for i in keep]
        x = tuple(sum((l * rows[c][k] for l, c in zip(lam, corral)), mpq(0))
                  for k in range(len(rows[0])))
    return x, corral, lam


def min_norm_vrep(points: Sequence[Sequence]) -> VrepResult:
    """Minimum-norm point of conv(points), with exact convex coefficients."""
    if not points:
        raise ValueError("min_norm_vrep needs at least one point")
    pts = [vec(p) for p in points]
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("points of unequal dimension")
    rows, L = to_int_rows(pts)
    x, corral, lam = wolfe_int(rows)
    coeffs = [mpq(0)] * len(pts)
    for c, l in zip(corral, lam):
        coeffs[c] = l
    point = tuple(a / L for a in x)
    return VrepResult(point, dot(point, point), tuple(coeffs))


def min_norm_hrep(ineqs: Sequence = (), eqs: Sequence = (), dim: int | None = None) -> HrepResult:
    """Projection of 0 onto {x : <a,x> <= b (ineqs), <a,x> = b (eqs)}."""
    ineqs = [(vec(a), rat(b)) for a, b in ineqs]
    eqs = [(vec(a), rat(b)) for a, b in eqs]
    if dim is None:
        if not ineqs and not eqs:
            raise ValueError("dimension unknown for an empty system")
        dim = len((ineqs + eqs)[0][0])
    if any(len(a) != dim for a, _ in ineqs + eqs):
        raise ValueError("constraint rows of unequal dimension")
    m_in = len(ineqs)
    # Internal form n.x >= c; o is the orientation relative to the input row.
    ge_rows = [(tuple(-v for v in a), -b, -1) for a, b in ineqs]
    x = zeros(dim)
    active: list[int] = []      # constraint ids; ids >= m_in are equalities
    normals: list[RVec] = []
    rhs: list = []
    orient: list[int] = []
    u: list = []

    def infeasible(p_id, p_orient, r):
        y = [mpq(0)] * (m_in + len(eqs))
        y[p_id] += -p_orient
        for rj, cid, oj in zip(r, active, orient):
            y[cid] += rj * oj
        return HrepResult("infeasible", None, INF, tuple(y))

    def add(p_id, n_p, c_p, o_p, is_eq):
        nonlocal x
        u_plus = mpq(0)
        while True:
            s = dot(n_p, x) - c_p
            if normals:
                gram = [[dot(a, b) for b in normals] for a in normals]
                r = solve_square(gram, [dot(a, n_p) for a in normals])
                z = tuple(n_p[k] - sum((rj * nj[k] for rj, nj in zip(r, normals)), mpq(0))
                          for k in range(dim))
            else:
                r, z = (), n_p
            t1, k = INF, None
            for pos, (rj, cid) in enumerate(zip(r, active)):
                if cid < m_in and rj > 0:
                    ratio = u[pos] / rj
                    if ratio < t1:
                        t1, k = ratio, pos
            zn = dot(z, n_p)
            if zn != 0:
                t2 = -s / zn
            elif is_eq and s == 0:
                return None  # redundant equality
            else:
                t2 = INF
            t = min(t1, t2)
            if t == INF:
                return infeasible(p_id, o_p, r)
            if zn != 0:
                x = tuple(a + t * b for a, b in zip(x, z))
            for pos in range(len(u)):
                u[pos] -= t * r[pos]
            u_plus += t
            if t2 <= t1:
                active.append(p_id)
                normals.append(n_p)
                rhs.append(c_p)
                orient.append(o_p)
                u.append(u_plus)
                return None
            for lst in (active, normals, rhs, orient, u):
                del lst[k]

    for e, (a, b) in enumerate(eqs):
        s = dot(a, x) - b
        if s > 0:
            res = add(m_in + e, tuple(-v for v in a), -b, -1, True)
        else:
            res = add(m_in + e, a, b, 1, True)
        if res is not None:
            return res
    while True:
        worst, p = mpq(0), None
        act = set(active)
        for i, (n, c, _) in enumerate(ge_rows):
            if i in act:
                continue
            s = dot(n, x) - c
            if s < worst:
                worst, p = s, i
        if p is None:
            return HrepResult("optimal", x, dot(x, x))
        n, c, o = ge_rows[p]
        res = add(p, n, c, o, False)
        if res is not None:
            return res


def min_norm_hrep_kkt(ineqs: Sequence = (), eqs: Sequence = (), dim: int | None = None) -> HrepResult:
    """Exhaustive KKT active-set search (reference implementation).

    Feasibility is decided first by the simplex method; then every subset
    of at most d inequalities is tried as the active set.
    """
    ineqs = [(vec(a), rat(b)) for a, b in ineqs]
    eqs = [(vec(a), rat(b)) for a, b in eqs]
    if dim is None:
        dim = len((ineqs + eqs)[0][0])
    lp = lp_solve(LpProblem(zeros(dim), tuple(ineqs), tuple(eqs)))
    if lp.status != OPTIMAL:
        return HrepResult("infeasible", None, INF, lp.farkas)
    # Independent equality rows suffice once the system is known feasible.
    eq_rows: list = []
    for a, b in eqs:
        if rank([r for r, _ in eq_rows] + [a]) > len(eq_rows):
            eq_rows.append((a, b))
    free = dim - len(eq_rows)
    for size in range(0, free + 1):
        for subset in combinations(range(len(ineqs)), size):
            rows = eq_rows + [ineqs[i] for i in subset]
            if rows:
                if rank([a for a, _ in rows]) < len(rows):
                    continue
                gram = [[dot(a, b) for b, _ in rows] for a, _ in rows]
                mu = solve_square(gram, [-b for _, b in rows])
                x = tuple(-sum((m * a[k] for m, (a, _) in zip(mu, rows)), mpq(0))
                          for k in range(dim))
                if any(m < 0 for m in mu[len(eq_rows):]):
                    continue
            else:
                x = zeros(dim)
            if all(dot(a, x) <= b for a, b in ineqs) and all(dot(a, x) == b for a, b in eqs):
                return HrepResult("optimal", x, dot(x, x))
    raise ArithmeticError("no KKT point found for a feasible system")
