"""Exact polytopes in V-representation and the operations built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .cones import Cone, refine_fan
from .linalg import affine_hull, nullspace, rank, row_basis, solve_any
from .lp import OPTIMAL, LpProblem, lp_solve
from .minnorm import wolfe_int
from .rational import (RVec, add, dot, exact_matmul, int_array, lincomb, primitive, rat,
                       sub, to_int_rows, unit, vec, zeros)


@dataclass(frozen=True)
class Polytope:
    """Convex hull of a reduced, lexicographically sorted vertex list."""

    dim: int
    vertices: tuple
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a polytope needs at least one vertex")

    @classmethod
    def point(cls, x) -> "Polytope":
        x = vec(x)
        return cls(len(x), (x,))

    @property
    def facets(self):
        if "facets" not in self._cache:
            self._cache["facets"] = facets(self)
        return self._cache["facets"]

    def support(self, n) -> object:
        """sigma_P(n) = max over vertices of <n, v>."""
        return max(dot(n, v) for v in self.vertices)

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class HPolyhedron:
    """{x : <a, x> <= b for (a, b) in ineqs, <a, x> = b for (a, b) in eqs}."""

    dim: int
    ineqs: tuple
    eqs: tuple = ()

    def contains(self, x) -> bool:
        return (all(dot(a, x) <= b for a, b in self.ineqs)
                and all(dot(a, x) == b for a, b in self.eqs))


def _dedup_sorted(points) -> list[RVec]:
    return sorted(set(vec(p) for p in points))


def _check_dims(points) -> int:
    d = len(points[0])
    if any(len(p) != d for p in points):
        raise ValueError("points of unequal dimension")
    return d


def reduce_vertices(points: Sequence[Sequence], certify: list | None = None) -> Polytope:
    """Extreme points of a finite set.

    Each candidate is tested with Wolfe's algorithm on the differences to
    the other remaining candidates; a zero minimum-norm point is an exact
    convex-combination certificate that the candidate is redundant.  If
    ``certify`` is a list, (removed point, {other point: weight}) pairs are
    appended to it.
    """
    if not points:
        raise ValueError("reduce_vertices needs at least one point")
    _check_dims(points)
    pts = _dedup_sorted(points)
    d = len(pts[0])
    if len(pts) <= 2:
        return Polytope(d, tuple(pts))
    rows, _ = to_int_rows(pts)
    mat = int_array(rows)
    known = _cheap_extremes(mat)
    alive = list(range(len(pts)))
    for i in range(len(pts)):
        if i in known:
            continue
        others = [j for j in alive if j != i]
        diff = mat[others] - mat[i]
        x, corral, lam = wolfe_int(None, diff)
        if all(a == 0 for a in x):
            alive.remove(i)
            if certify is not None:
                certify.append((pts[i], {pts[others[c]]: l for c, l in zip(corral, lam)}))
    return Polytope(d, tuple(pts[i] for i in alive))


_PROBES = np.random.default_rng(0x5eed).integers(-1024, 1025, size=(64, 64))


def _cheap_extremes(mat: np.ndarray) -> set[int]:
    """Indices that are unique maximizers of some fixed probe functional."""
    out = set()
    n, d = mat.shape
    probes = np.vstack([np.eye(d, dtype=np.int64), -np.eye(d, dtype=np.int64),
                        _PROBES[:, :d] if d <= _PROBES.shape[1] else np.zeros((0, d), np.int64)])
    vals = exact_matmul(mat, probes.T)
    for col in vals.T:
        m = col.max()
        idx = np.flatnonzero(col == m)
        if len(idx) == 1:
            out.add(int(idx[0]))
    # The lexicographic extremes are always vertices.
    out.add(0)
    out.add(n - 1)
    return out


def hull_of_union(parts: Sequence[Polytope]) -> Polytope:
    if not parts:
        raise ValueError("hull_of_union needs at least one polytope")
    if len(parts) == 1:
        return parts[0]
    return reduce_vertices([v for p in parts for v in p.vertices])


def _independent(parts: Sequence[Polytope]) -> bool:
    """True when the direction spaces of the summands are linearly independent."""
    bases = []
    total = 0
    for p in parts:
        b = row_basis([sub(v, p.vertices[0]) for v in p.vertices[1:]])
        total += len(b)
        bases.extend(b)
    return rank(bases) == total if bases else True


def minkowski_sum(parts: Sequence[Polytope]) -> Polytope:
    """Vertices of P_1 + ... + P_R.

    Singleton summands are translations.  When the remaining summands span
    independent directions every combination of vertices is a vertex.
    Otherwise the normal fans are refined together: a cone is split only
    while some summand's maximizer is not constant on it, and each final
    cone contributes the sum of the per-summand maximizers.
    """
    if not parts:
        raise ValueError("minkowski_sum needs at least one polytope")
    d = parts[0].dim
    if any(p.dim != d for p in parts):
        raise ValueError("summands of unequal dimension")
    shift = zeros(d)
    big = []
    for p in parts:
        if len(p.vertices) == 1:
            shift = add(shift, p.vertices[0])
        else:
            big.append(p)
    if not big:
        return Polytope(d, (shift,))
    if len(big) == 1:
        return Polytope(d, tuple(add(v, shift) for v in big[0].vertices))
    if _independent(big):
        verts = []
        for combo in product(*(p.vertices for p in big)):
            s = shift
            for v in combo:
                s = add(s, v)
            verts.append(s)
        return Polytope(d, tuple(sorted(verts)))
    cells = normal_fan_refinement([p.vertices for p in big], d)
    verts = set()
    for _, labels in cells:
        s = shift
        for p, i in zip(big, labels):
            s = add(s, p.vertices[i])
        verts.add(s)
    return Polytope(d, tuple(sorted(verts)))


class _ArgmaxSelector:
    """Selection of the maximizing point of a finite set on a cone."""

    def __init__(self, points: Sequence[RVec]):
        rows, _ = to_int_rows(points)
        self.mat = int_array(rows)
        self.n = len(rows)

    def check(self, gens: np.ndarray, rep: np.ndarray):
        """Returns ("ok", index) or ("split", normal as int tuple)."""
        if self.n == 1:
            return "ok", 0
        vrep = exact_matmul(self.mat, rep)
        a = int(np.argmax(vrep)) if vrep.dtype != object else max(
            range(self.n), key=lambda k: (vrep[k], -k))
        vals = exact_matmul(self.mat, gens.T)
        diff = vals - vals[a]
        bad = np.flatnonzero((diff > 0).any(axis=1))
        if len(bad) == 0:
            return "ok", a
        # Closest competitor at the representative direction.
        j = max(bad, key=lambda k: (vrep[k], -k))
        h = primitive([int(x) - int(y) for x, y in zip(self.mat[j], self.mat[a])])
        return "split", h


def normal_fan_refinement(point_sets: Sequence[Sequence[RVec]], d: int, root: Cone | None = None):
    """Cones on which every set has a constant unique maximizer.

    Returns [(cone, (index of maximizer in each set))].
    """
    sels = [_ArgmaxSelector(ps) for ps in point_sets]

    def decide(cone: Cone):
        gens = cone.generator_matrix()
        rep = int_array([cone.rep_dir()]).reshape(-1)
        labels = []
        for s in sels:
            kind, val = s.check(gens, rep)
            if kind == "split":
                return "split", val
            labels.append(val)
        return "leaf", tuple(labels)

    return refine_fan(d, decide, root)


def facets(P: Polytope):
    """Facet inequalities and affine-hull equalities of conv(P.vertices).

    Returns (ineqs, eqs): lists of (normal, offset) with <n, x> <= b on P
    and <n, x> = b on the affine hull.  Inequality normals vanish on the
    directions orthogonal to the hull, so each is valid within it.  The
    facets are the extreme rays of the cone of valid inequalities,
    obtained by double description in affine-hull coordinates.
    """
    verts = list(P.vertices)
    base, dirs, eqs = affine_hull(verts)
    k = len(dirs)
    if k == 0:
        return [], eqs
    # rref rows have a unit pivot, so coordinates in the basis are read off pivots.
    pivots = [next(i for i, x in enumerate(r) if x != 0) for r in dirs]
    coords = [[sub(v, base)[p] for p in pivots] for v in verts]
    icoords, L = to_int_rows(coords)
    cone = Cone.whole(k + 1)
    order = _insertion_order(icoords)
    for idx in order:
        y = icoords[idx]
        h = tuple(-a for a in y) + (L,)
        if cone.cuts(h):
            cone = cone.intersect(h)
        else:
            cone = cone.with_redundant_row(h)
    ineqs = []
    for r in cone.rays:
        a, beta = r[:k], r[k]
        if not any(a):
            continue
        n = [mpq(0)] * len(base)
        for p, ai in zip(pivots, a):
            n[p] = mpq(ai)
        n = tuple(n)
        ineqs.append((n, mpq(beta) + dot(n, base)))
    ineqs = sorted(set(ineqs))
    return ineqs, eqs


def _insertion_order(points: Sequence[Sequence[int]]) -> list[int]:
    """Lexicographic order after putting an affinely independent set first."""
    first = [0]
    basis: list = []
    for i in range(1, len(points)):
        cand = basis + [tuple(a - b for a, b in zip(points[i], points[0]))]
        if rank(cand) > len(basis):
            basis = cand
            first.append(i)
    chosen = set(first)
    return first + [i for i in range(len(points)) if i not in chosen]


def facet_vertices(ineqs, eqs, d: int) -> list[RVec]:
    """Vertices of a bounded polyhedron given by inequalities and equalities.

    The equalities are solved first.  In the remaining free coordinates y
    the polytope is lifted to the cone {(y, t) : <n, y> <= b t, t >= 0},
    whose extreme rays with t > 0 are the vertices; double description
    finds them.
    """
    ineqs = [(vec(n), rat(b)) for n, b in ineqs]
    eqs = [(vec(n), rat(b)) for n, b in eqs]
    rows = [n for n, _ in eqs]
    base = solve_any(rows, [b for _, b in eqs], d)
    if base is None:
        return []
    basis = nullspace(rows, d) if rows else [unit(d, i) for i in range(d)]
    k = len(basis)
    if k == 0:
        return [base] if all(dot(n, base) <= b for n, b in ineqs) else []
    lifted = [tuple(-dot(n, e) for e in basis) + (b - dot(n, base),) for n, b in ineqs]
    lifted.append((0,) * k + (1,))
    cone = Cone.from_rows(lifted, k + 1)
    if cone.lines or any(g[k] == 0 for g in cone.rays):
        raise ValueError("polyhedron is unbounded or has empty interior in its affine hull")
    out = set()
    for g in cone.rays:
        y = [mpq(c, g[k]) for c in g[:k]]
        out.add(add(base, lincomb(y, basis)))
    return sorted(out)


def erosion(X: Polytope, Y: Polytope) -> HPolyhedron:
    """{s : s + Y subset of X} as an H-polyhedron."""
    if X.dim != Y.dim:
        raise ValueError("erosion of polytopes of unequal dimension")
    ineqs, eqs = X.facets
    out = []
    for n, b in ineqs:
        out.append((n, b - Y.support(n)))
    for n, b in eqs:
        nn = tuple(-a for a in n)
        out.append((n, b - Y.support(n)))
        out.append((nn, -b - Y.support(nn)))
    return HPolyhedron(X.dim, tuple(out), ())


def in_hull(p, P: Polytope | Sequence) -> bool:
    """Exact membership of p in conv(P) by a minimum-norm computation."""
    verts = P.vertices if isinstance(P, Polytope) else [vec(v) for v in P]
    p = vec(p)
    if p in verts:
        return True
    rows, _ = to_int_rows([sub(v, p) for v in verts])
    x, _, _ = wolfe_int(rows)
    return all(a == 0 for a in x)


def simultaneously_exposed(x, X: Polytope, y, Y: Polytope) -> bool:
    """Is there u with <x - x', u> >= 1 and <y - y', u> >= 1 for all other vertices?"""
    x, y = vec(x), vec(y)
    if x not in X.vertices:
        raise ValueError("x is not a vertex of X")
    if y not in Y.vertices:
        raise ValueError("y is not a vertex of Y")
    rows = []
    for v in X.vertices:
        if v != x:
            rows.append((sub(v, x), mpq(-1)))
    for v in Y.vertices:
        if v != y:
            rows.append((sub(v, y), mpq(-1)))
    if not rows:
        return True
    res = lp_solve(LpProblem(zeros(X.dim), tuple(rows)))
    return res.status == OPTIMAL
