"""Exact Gaussian elimination over the rationals."""
from __future__ import annotations

from typing import Sequence

from gmpy2 import mpq

from .rational import RVec, dot, rat, sub


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[rat(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], d: int) -> list[RVec]:
    """Basis of {x : Ax = 0}."""
    if not rows:
        return [tuple(mpq(1) if i == j else mpq(0) for i in range(d)) for j in range(d)]
    red, piv = rref(rows, d)
    free = [c for c in range(d) if c not in piv]
    basis = []
    for f in free:
        x = [mpq(0)] * d
        x[f] = mpq(1)
        for row, pc in zip(red, piv):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_square(a: Sequence[Sequence], b: Sequence) -> RVec | None:
    """Solve Ax = b for square A; None when A is singular."""
    n = len(a)
    aug = [list(map(rat, row)) + [rat(bi)] for row, bi in zip(a, b)]
    red, piv = rref(aug, n + 1)
    if len(piv) < n or piv[-1] == n:
        return None
    return tuple(red[i][n] for i in range(n))


def solve_int(a: Sequence[Sequence[int]], b: Sequence[int]) -> RVec | None:
    """Solve Ax = b for a square integer system by fraction-free elimination."""
    n = len(a)
    m = [list(row) + [bi] for row, bi in zip(a, b)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return None
        m[k], m[p] = m[p], m[k]
        pk = m[k]
        piv = pk[k]
        for i in range(k + 1, n):
            mi = m[i]
            f = mi[k]
            m[i] = [(piv * x - f * y) // prev for x, y in zip(mi, pk)]
        prev = piv
    x = [mpq(0)] * n
    for k in range(n - 1, -1, -1):
        s = mpq(m[k][n]) - sum((m[k][j] * x[j] for j in range(k + 1, n)), mpq(0))
        x[k] = s / m[k][k]
    return tuple(x)


def solve_any(a: Sequence[Sequence], b: Sequence, d: int) -> RVec | None:
    """Some solution of Ax = b (free variables set to 0), or None if inconsistent."""
    if not a:
        return tuple(mpq(0) for _ in range(d))
    aug = [list(map(rat, row)) + [rat(bi)] for row, bi in zip(a, b)]
    red, piv = rref(aug, d + 1)
    if piv and piv[-1] == d:
        return None
    x = [mpq(0)] * d
    for row, pc in zip(red, piv):
        x[pc] = row[d]
    return tuple(x)


def row_basis(rows: Sequence[Sequence]) -> list[RVec]:
    if not rows:
        return []
    red, _ = rref(rows)
    return [tuple(r) for r in red]


def affine_hull(points: Sequence[Sequence]):
    """Affine hull of a point set.

    Returns (base point, direction basis, equalities) where the hull is
    base + span(directions) = {x : <a, x> = b for every (a, b) in equalities}.
    """
    base = tuple(rat(x) for x in points[0])
    d = len(base)
    diffs = [sub(p, base) for p in points[1:]]
    dirs = row_basis(diffs)
    normals = nullspace(dirs, d)
    eqs = [(n, dot(n, base)) for n in normals]
    return base, dirs, eqs
