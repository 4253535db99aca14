"""Brute-force verifiers.

Everything here is exponential and deliberately naive.  The engine pieces
used are the simplex solver, exact Gaussian elimination, plain evaluation
and, inside naive_minkowski only, vertex reduction (itself audited against
lp_reduce), so an audit never re-runs the code path it is checking.
"""
from __future__ import annotations

import contextlib
import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence
from unittest import mock

from gmpy2 import mpq

from . import gadgets, polytope, subdiff
from .linalg import nullspace, rank, solve_any
from .lp import OPTIMAL, LpProblem, lp_solve
from .pa import LocalModel, mc_dim
from .polytope import Polytope
from .rational import INF, RVec, add, dot, fmt_rational, fmt_vec, norm_sq, sub, vec, zeros


def has_k_clique(G: gadgets.Graph, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be positive")
    return any(all(G.adjacent(u, v) for u, v in combinations(c, 2))
               for c in combinations(range(1, G.n + 1), k))


def lp_in_hull(p, points: Sequence) -> bool:
    """p in conv(points), by infeasibility of a separating inequality.

    p is outside exactly when some (c, gamma) has <c, q> <= gamma on every
    point and <c, p> >= gamma + 1.
    """
    p = vec(p)
    rows = [(vec(q) + (mpq(-1),), 0) for q in points]
    rows.append((tuple(-x for x in p) + (mpq(1),), -1))
    res = lp_solve(LpProblem(zeros(len(p) + 1), tuple(rows)))
    return res.status != OPTIMAL


def lp_reduce(points: Sequence) -> list[RVec]:
    """Points not in the hull of the other points."""
    pts = sorted(set(vec(p) for p in points))
    keep = list(pts)
    for p in pts:
        others = [q for q in keep if q != p]
        if others and lp_in_hull(p, others):
            keep = others
    return keep


def naive_minkowski(parts: Sequence[Polytope]) -> Polytope:
    """All sums of one vertex per part, then vertex reduction.

    Reduction of the up to 6^3 sums goes through the engine's
    reduce_vertices, which the audits check separately against lp_reduce;
    the fan refinement under test is bypassed entirely.
    """
    d = parts[0].dim
    sums = set()
    for combo in product(*(P.vertices for P in parts)):
        s = zeros(d)
        for v in combo:
            s = add(s, v)
        sums.add(s)
    return polytope.reduce_vertices(list(sums))


def brute_facets(P: Polytope):
    """Facets of a full-dimensional polytope from affinely spanning vertex subsets.

    Returns the sorted list of (normal, offset) with the normal scaled so
    its first nonzero entry has absolute value 1.
    """
    verts = list(P.vertices)
    d = P.dim
    out = set()
    for sub_ in combinations(verts, d):
        diffs = [sub(v, sub_[0]) for v in sub_[1:]]
        if d > 1 and rank(diffs) < d - 1:
            continue
        ns = nullspace(diffs, d) if diffs else [tuple(mpq(1) if i == 0 else mpq(0) for i in range(d))]
        if len(ns) != 1:
            continue
        n = ns[0]
        b = dot(n, sub_[0])
        vals = [dot(n, v) for v in verts]
        if all(x <= b for x in vals):
            pass
        elif all(x >= b for x in vals):
            n, b = tuple(-a for a in n), -b
        else:
            continue
        if all(dot(n, v) == b for v in verts):
            continue
        scale = abs(next(a for a in n if a != 0))
        out.add((tuple(a / scale for a in n), b / scale))
    return sorted(out)


def facet_vertices(ineqs, d: int) -> list[RVec]:
    """Vertices of {x : <n, x> <= b} by brute force over d-subsets of facets."""
    out = set()
    for sub_ in combinations(ineqs, d):
        rows = [n for n, _ in sub_]
        if rank(rows) < d:
            continue
        x = solve_any(rows, [b for _, b in sub_], d)
        if x is not None and all(dot(n, x) <= b for n, b in ineqs):
            out.add(x)
    return sorted(out)


@dataclass(frozen=True)
class ContainmentAudit:
    ok: bool
    missing: RVec | None = None

    def __bool__(self):
        return self.ok


def containment_audit(s, X: Polytope, Y: Polytope) -> ContainmentAudit:
    """s + y in X for every vertex y of Y, checked one LP at a time."""
    s = vec(s)
    for y in Y.vertices:
        if not lp_in_hull(add(s, y), X.vertices):
            return ContainmentAudit(False, y)
    return ContainmentAudit(True)


def _random_direction(rng: random.Random, d: int) -> RVec:
    return tuple(mpq(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(d))


def directional_audit(model: LocalModel, xi, trials: int = 200, rng: random.Random | None = None) -> bool:
    """<xi, u> <= phi(u) on sampled directions, slope differences and axes."""
    rng = rng or random.Random(0)
    xi = vec(xi)
    d = model.dim
    dirs = []
    for i in range(d):
        for sgn in (1, -1):
            dirs.append(tuple(mpq(sgn) if j == i else mpq(0) for j in range(d)))
    for a, b in combinations(model.slopes, 2):
        dirs.append(sub(a, b))
        dirs.append(sub(b, a))
    dirs += [_random_direction(rng, d) for _ in range(trials)]
    return all(dot(xi, u) <= model(u) for u in dirs)


# ---------------------------------------------------------------------------
# Arrangement oracle for small local models

def _hyperplanes(model: LocalModel) -> list[RVec]:
    seen, out = set(), []
    for a, b in combinations(model.slopes, 2):
        n = sub(a, b)
        first = next(x for x in n if x != 0)
        n = tuple(x / first for x in n)
        if n not in seen:
            seen.add(n)
            out.append(n)
    return out


def arrangement_cells(model: LocalModel) -> list[tuple[list[RVec], RVec, RVec]]:
    """Full-dimensional cells of the slope-difference arrangement.

    Returns (rows h with <h, u> >= 0, interior point, slope) per cell.  A sign
    pattern is kept when <s h, u> >= 1 is LP-feasible for all its rows.
    """
    d = model.dim
    hyps = _hyperplanes(model)
    cells = []

    def feasible(rows):
        res = lp_solve(LpProblem(zeros(d), tuple((tuple(-x for x in h), -1) for h in rows)))
        return res.point if res.status == OPTIMAL else None

    def rec(i, rows, pt):
        if i == len(hyps):
            cells.append((rows, pt))
            return
        for sgn in (1, -1):
            h = tuple(sgn * x for x in hyps[i])
            q = feasible(rows + [h])
            if q is not None:
                rec(i + 1, rows + [h], q)

    rec(0, [], zeros(d))
    out = []
    for rows, pt in cells:
        vals = [dot(s, pt) for s in model.slopes]
        best = max(range(len(model.groups)), key=lambda g: min(vals[j] for j in model.groups[g]))
        j = min(model.groups[best], key=lambda j: vals[j])
        out.append((rows, pt, model.slopes[j]))
    return out


def oracle_active_slopes(model: LocalModel) -> list[RVec]:
    return sorted(set(s for _, _, s in arrangement_cells(model)))


def _cell_box_vertices(rows, d):
    """Vertices of the cell intersected with the box [-1, 1]^d."""
    ineqs = [(tuple(-x for x in h), mpq(0)) for h in rows]
    for i in range(d):
        for sgn in (1, -1):
            ineqs.append((tuple(mpq(sgn) if j == i else mpq(0) for j in range(d)), mpq(1)))
    return facet_vertices(ineqs, d)


def oracle_frechet_constraints(model: LocalModel) -> list[tuple[RVec, object]]:
    """<xi, u> <= phi(u) at the vertices u of every cell cut by a box.

    phi - <xi, .> is linear on a cell, so its sign on the cell is decided
    at the vertices of the bounded slice.
    """
    d = model.dim
    cons = set()
    for rows, _, s in arrangement_cells(model):
        for u in _cell_box_vertices(rows, d):
            if any(u):
                cons.add((u, dot(s, u)))
    return sorted(cons)


def kkt_min_norm_hrep(cons: Sequence, d: int):
    """Projection of 0 onto {x : <a, x> <= b} by trying every active set.

    Returns dist_sq or INF.
    """
    cons = list(cons)
    if not lp_solve(LpProblem(zeros(d), tuple(cons))).status == OPTIMAL:
        return INF
    best = None
    for size in range(0, d + 1):
        for act in combinations(range(len(cons)), size):
            A = [cons[i][0] for i in act]
            if A and rank(A) < len(A):
                continue
            # x = A^T mu with A A^T mu = b
            gram = [[dot(a, c) for c in A] for a in A]
            mu = solve_any(gram, [cons[i][1] for i in act], len(A)) if A else ()
            if mu is None:
                continue
            x = zeros(d)
            for m, a in zip(mu, A):
                x = add(x, tuple(m * t for t in a))
            # KKT: x = -sum lambda_i a_i with lambda >= 0, i.e. mu <= 0
            if any(m > 0 for m in mu):
                continue
            if all(dot(a, x) <= b for a, b in cons):
                v = norm_sq(x)
                if best is None or v < best:
                    best = v
        if best is not None:
            return best
    return best if best is not None else INF


def kkt_min_norm_vrep(points: Sequence) -> object:
    """dist_sq from 0 to conv(points) by trying every affinely independent subset."""
    pts = sorted(set(vec(p) for p in points))
    d = len(pts[0])
    best = None
    for size in range(1, min(d + 1, len(pts)) + 1):
        for S in combinations(pts, size):
            diffs = [sub(p, S[0]) for p in S[1:]]
            if diffs and rank(diffs) < len(diffs):
                continue
            gram = [[dot(a, b) for b in S] + [mpq(1)] for a in S] + [[mpq(1)] * size + [mpq(0)]]
            sol = solve_any(gram, [mpq(0)] * size + [mpq(1)], size + 1)
            if sol is None or any(l < 0 for l in sol[:size]):
                continue
            x = zeros(d)
            for l, p in zip(sol[:size], S):
                x = add(x, tuple(l * t for t in p))
            nx = norm_sq(x)
            if all(dot(x, p) >= nx for p in pts):
                if best is None or nx < best:
                    best = nx
    return best


# ---------------------------------------------------------------------------
# Audit sweeps

def all_graphs(n: int) -> Iterator[gadgets.Graph]:
    pairs = list(combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield gadgets.Graph(n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))


def graph_record(G: gadgets.Graph, k: int) -> dict:
    """Engine verdicts on both gadgets against the clique oracle."""
    clique = has_k_clique(G, k)
    fg = gadgets.gen_frechet_gadget(G, k)
    cg = gadgets.gen_clarke_gadget(G, k)
    df = subdiff.frechet_dist(fg["dc"], zeros(mc_dim(fg["dc"].h)))[0]
    dc = subdiff.clarke_dist_pair(cg["dc"], cg["maxmin"], zeros(cg["maxmin"].dim))[0]
    want_f = INF if clique else mpq(0)
    want_c = mpq(0) if clique else mpq(1, 4)
    return {
        "sweep": "graphs", "N": G.n, "k": k, "edges": sorted(map(list, G.edges)),
        "engine": {"frechet_dist_sq": fmt_rational(df), "clarke_dist_sq": fmt_rational(dc)},
        "oracle": {"has_clique": clique, "frechet_dist_sq": fmt_rational(want_f),
                   "clarke_dist_sq": fmt_rational(want_c)},
        "match": df == want_f and dc == want_c,
    }


def audit_graphs(max_n: int = 5, ks: Sequence[int] = (2, 3)) -> Iterator[dict]:
    for n in range(1, max_n + 1):
        for G in all_graphs(n):
            for k in ks:
                yield graph_record(G, k)


def random_polytope(rng: random.Random, d: int, nmax: int = 6, span: int = 4) -> Polytope:
    n = rng.randint(1, nmax)
    pts = set()
    while len(pts) < n:
        pts.add(tuple(mpq(rng.randint(-span, span), rng.choice((1, 1, 2))) for _ in range(d)))
    return Polytope(d, tuple(lp_reduce(pts)))


BRUTE_FACET_LIMIT = 12


def _normalize(n, b):
    c = abs(next(x for x in n if x != 0))
    return tuple(a / c for a in n), b / c


def polytope_record(rng: random.Random, d: int) -> dict:
    """Minkowski sum against all sums, reduction against LP, facets both ways.

    Each part is re-reduced from its vertices plus all pairwise midpoints.
    Every polytope's facet system must give back its vertices; small
    full-dimensional sums are also compared facet by facet with brute force.
    """
    parts = [random_polytope(rng, d) for _ in range(rng.randint(2, 3))]
    fast = polytope.minkowski_sum(parts)
    slow = naive_minkowski(parts)
    reduce_ok = True
    for P in parts:
        raw = list(P.vertices) + [tuple((a + b) / 2 for a, b in zip(p, q))
                                  for p, q in combinations(P.vertices, 2)]
        reduce_ok &= polytope.reduce_vertices(raw).vertices == tuple(lp_reduce(raw))
    round_trip = all(tuple(polytope.facet_vertices(*polytope.facets(P), d)) == P.vertices
                     for P in parts + [fast])
    match = fast.vertices == slow.vertices and reduce_ok and round_trip
    rec = {"sweep": "polytopes", "dim": d,
           "parts": [[fmt_vec(v) for v in P.vertices] for P in parts],
           "engine": {"vertices": len(fast.vertices)}, "oracle": {"vertices": len(slow.vertices)},
           "reduce_ok": reduce_ok, "round_trip": round_trip}
    V = slow.vertices
    if (match and d < len(V) <= BRUTE_FACET_LIMIT
            and rank([sub(v, V[0]) for v in V[1:]]) == d):
        ineqs, _ = polytope.facets(slow)
        norm = sorted(_normalize(n, b) for n, b in ineqs)
        brute = brute_facets(slow)
        rec["engine"]["facets"] = len(norm)
        rec["oracle"]["facets"] = len(brute)
        match = norm == brute and tuple(facet_vertices(brute, d)) == V
    rec["match"] = match
    return rec


def audit_polytopes(max_d: int = 3, count: int = 60, seed: int = 0) -> Iterator[dict]:
    rng = random.Random(seed)
    for i in range(count):
        yield polytope_record(rng, 1 + i % max_d)


@contextlib.contextmanager
def inject_fault():
    """Negative control: engine routines that silently return wrong answers."""
    real_ms = polytope.minkowski_sum
    real_cd = subdiff.clarke_dist
    real_pair = subdiff.clarke_dist_pair

    def bad_ms(parts):
        P = real_ms(parts)
        return Polytope(P.dim, P.vertices[:-1]) if len(P.vertices) > 1 else P

    def bad_cd(f, w):
        dist, wit, cert = real_cd(f, w)
        return dist + 1, wit, cert

    def bad_pair(f_dc, f_mm, w):
        dist, wit, cert = real_pair(f_dc, f_mm, w)
        return dist + 1, wit, cert

    with mock.patch.object(polytope, "minkowski_sum", bad_ms), \
            mock.patch.object(subdiff, "clarke_dist", bad_cd), \
            mock.patch.object(subdiff, "clarke_dist_pair", bad_pair):
        yield
