"""Fréchet and Clarke stationarity tests for both input models.

Max-min route: the local model phi at w is split into cones on which it
is linear.  A cone is accepted with slope a once (W) some group is >= a on
all of it and (D) every group has a member <= a on all of it; otherwise
it is cut by the hyperplane of a member that changes sign there.  The
accepted slopes are the essentially active slopes S_e, and the generators
of the accepted cones give the Fréchet subdifferential as
{xi : <xi, r> <= phi(r)}.

DC route: X and Y are the Clarke subdifferentials of h and g at w.  The
Fréchet subdifferential is the erosion {s : s + Y in X}; the Clarke
subdifferential is the hull of x - y over simultaneously exposed vertex
pairs, found by refining the two normal fans together.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .cones import Cone, ConeCell, refine_fan
from .lp import OPTIMAL, LpProblem, lp_solve
from .minnorm import min_norm_hrep, min_norm_vrep, wolfe_int
from .pa import (DcFunction, Leaf, LocalModel, Max, MaxMinFormula, Sum,
                 eval_dc, eval_maxmin, flat_pieces, local_model,
                 make_local_model, mc_dim)
from .polytope import (Polytope, erosion, hull_of_union, in_hull,
                       minkowski_sum, normal_fan_refinement, reduce_vertices)
from .rational import (INF, RVec, dot, exact_matmul, fmt_rational, fmt_vec,
                       int_array, primitive, primitive_rational, rat, sub, to_int_rows, vec, zeros)

FRECHET = "frechet"
CLARKE = "clarke"


@dataclass(frozen=True)
class Verdict:
    notion: str
    epsilon: object
    dist_sq: object
    witness: RVec | None = None
    certificate: dict = field(default_factory=dict)
    polarity: str = "yes"

    @property
    def yes(self) -> bool:
        """The YES predicate dist <= epsilon, compared as dist^2 <= epsilon^2."""
        return self.dist_sq != INF and self.dist_sq <= self.epsilon * self.epsilon

    @property
    def holds(self) -> bool:
        return self.yes if self.polarity == "yes" else not self.yes

    def to_json(self) -> dict:
        return {
            "notion": self.notion,
            "epsilon": fmt_rational(self.epsilon),
            "dist_sq": fmt_rational(self.dist_sq),
            "yes": self.yes,
            "polarity": self.polarity,
            "holds": self.holds,
            "witness": fmt_vec(self.witness) if self.witness is not None else None,
            "certificate": self.certificate,
        }


# ---------------------------------------------------------------------------
# Subdifferentials of MC trees

def subdiff_mc(t, w) -> Polytope:
    """Vertices of the (Clarke = convex) subdifferential of an MC tree at w."""
    return _subdiff(t, w, True)


def subdiff_candidates(t, w) -> list[RVec]:
    """A finite set whose hull is the subdifferential; the root max is not reduced."""
    return _subdiff(t, w, False)


def _subdiff(t, w, reduce_root):
    w = vec(w)
    if len(w) != mc_dim(t):
        raise ValueError("dimension mismatch")
    values: dict = {}
    polys: dict = {}

    def value(node):
        key = id(node)
        v = values.get(key)
        if v is None:
            if isinstance(node, Leaf):
                v = dot(node.x, w) + node.a
            elif isinstance(node, Sum):
                v = sum((value(c) for c in node.children), mpq(0))
            else:
                v = max(value(c) for c in node.children)
            values[key] = v
        return v

    def active_parts(node):
        top = value(node)
        parts, seen = [], set()
        for c in node.children:
            if value(c) == top:
                q = poly(c)
                if q.vertices not in seen:
                    seen.add(q.vertices)
                    parts.append(q)
        return parts

    def poly(node):
        key = id(node)
        p = polys.get(key)
        if p is None:
            if isinstance(node, Leaf):
                p = Polytope(len(node.x), (node.x,))
            elif isinstance(node, Sum):
                p = minkowski_sum([poly(c) for c in node.children])
            else:
                p = hull_of_union(active_parts(node))
            polys[key] = p
        return p

    if reduce_root or not isinstance(t, Max):
        p = poly(t)
        return p if reduce_root else list(p.vertices)
    return sorted(set(v for q in active_parts(t) for v in q.vertices))


# ---------------------------------------------------------------------------
# Linearity fan of a local model

class _MaxMinSelector:
    def __init__(self, model: LocalModel):
        rows, _ = to_int_rows(model.slopes)
        self.rows = rows
        self.S = int_array(rows)
        idx, starts = [], []
        for g in model.groups:
            starts.append(len(idx))
            idx.extend(g)
        self.idx = np.array(idx, dtype=np.int64)
        self.starts = np.array(starts, dtype=np.int64)
        self.ends = np.append(self.starts[1:], len(idx))
        self.cuts = 0

    def _members(self, g):
        return self.idx[self.starts[g]:self.ends[g]]

    def _argmin(self, members, vrep):
        vals = vrep[members]
        best = min(range(len(members)), key=lambda k: (vals[k], members[k]))
        return int(members[best])

    def _normal(self, j, a):
        return primitive([int(x) - int(y) for x, y in zip(self.rows[j], self.rows[a])])

    def decide(self, cone: Cone):
        rep = int_array([cone.rep_dir()]).reshape(-1)
        vrep = exact_matmul(self.S, rep)
        gv = vrep[self.idx]
        gmins = np.minimum.reduceat(gv, self.starts)
        top = gmins.max()
        win = int(np.flatnonzero(gmins == top)[0])
        a = self._argmin(self._members(win), vrep)
        gens = cone.generator_matrix()
        V = exact_matmul(self.S, gens.T)
        D = V - V[a]
        ge = (D >= 0).all(axis=1)
        if not np.logical_and.reduceat(ge[self.idx], self.starts).any():
            members = self._members(win)
            bad = [int(j) for j in members if not ge[j]]
            j = min(bad, key=lambda k: (vrep[k] - vrep[a], k))
            self.cuts += 1
            return "split", self._normal(j, a)
        le = (D <= 0).all(axis=1)
        dom = np.logical_or.reduceat(le[self.idx], self.starts)
        if not dom.all():
            g = int(np.flatnonzero(~dom)[0])
            j = self._argmin(self._members(g), vrep)
            self.cuts += 1
            return "split", self._normal(j, a)
        return "leaf", a


def linearity_fan(model: LocalModel) -> list[tuple[Cone, int]]:
    """Cones covering R^d on each of which phi is linear, with slope indices."""
    return _linearity_fan(model)


def _linearity_fan(model, stop=None):
    if len(model.slopes) == 1:
        return [(Cone.whole(model.dim), 0)]
    sel = _MaxMinSelector(model)
    return refine_fan(model.dim, sel.decide, stop=stop)


def active_slope_cells(model: LocalModel) -> list[ConeCell]:
    return [ConeCell.from_cone(c, slope=model.slopes[a]) for c, a in linearity_fan(model)]


def _ordered_unique(items):
    seen, out = set(), []
    for x in items:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def active_slopes(model: LocalModel) -> list[RVec]:
    """Essentially active slopes S_e of a local model, in canonical order."""
    return sorted(_ordered_unique(model.slopes[a] for _, a in linearity_fan(model)))


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Distances

def frechet_dist_maxmin(f, w, model: LocalModel | None = None):
    """(dist_sq, witness, certificate) for the Fréchet subdifferential at w."""
    if model is None:
        model = local_model(f, w)
    fan = linearity_fan(model)
    d = model.dim
    values: dict = {}
    for cone, a in fan:
        s = model.slopes[a]
        for g in cone.generators():
            if g not in values:
                values[g] = dot(s, g)
    rays = sorted(values)
    cons = [(vec(g), values[g]) for g in rays]
    cert = {"route": "maxmin", "cells": len(fan), "constraints": len(cons)}
    if not cons:
        # phi is linear on all of R^d: the subdifferential is its slope.
        s = model.slopes[0]
        return dot(s, s), s, cert
    res = min_norm_hrep(cons, (), d)
    if res.status != "optimal":
        cert["farkas"] = [[fmt_vec(cons[i][0]), fmt_rational(cons[i][1]), fmt_rational(y)]
                          for i, y in enumerate(res.farkas) if y != 0]
        return INF, None, cert
    return res.dist_sq, res.point, cert


def clarke_slopes_maxmin(model: LocalModel) -> list[RVec]:
    return active_slopes(model)


def exposed_pairs(X: Polytope, Y: Polytope) -> list[tuple[int, int]]:
    """Index pairs (i, j) with X.vertices[i], Y.vertices[j] simultaneously exposed."""
    cells = normal_fan_refinement([X.vertices, Y.vertices], X.dim)
    return sorted(set(lab for _, lab in cells))


def clarke_slopes_dc(X: Polytope, Y: Polytope) -> list[RVec]:
    return sorted(set(sub(X.vertices[i], Y.vertices[j]) for i, j in exposed_pairs(X, Y)))


def _clarke_from_slopes(slopes, route):
    if not slopes:
        raise AssertionError("empty set of essentially active slopes")
    res = min_norm_vrep(slopes)
    cert = {
        "route": route,
        "slopes": [fmt_vec(s) for s in slopes],
        "coeffs": [fmt_rational(c) for c in res.coeffs],
        "digest": _digest([fmt_vec(s) for s in slopes]),
    }
    return res.dist_sq, res.point, cert


def _translation(X: Polytope, Y: Polytope) -> RVec | None:
    """a with X = Y + a, or None.  Translation preserves lexicographic order."""
    if len(X.vertices) != len(Y.vertices):
        return None
    a = sub(X.vertices[0], Y.vertices[0])
    for x, y in zip(X.vertices, Y.vertices):
        if sub(x, y) != a:
            return None
    return a


def _common_exposed_vertex(X: Sequence[RVec], Y: Sequence[RVec]):
    """(v, u): a point v of both lists that u exposes in each hull, or None.

    v is exposed in both exactly when 0 is not in the hull of the
    differences x - v and y - v; the minimum-norm point p of that hull
    then gives u = -p.  Non-extreme points are rejected automatically,
    so X may be an unreduced candidate list.
    """
    X, Y = list(X), list(Y)
    ys = set(Y)
    common = [v for v in X if v in ys]
    if not common:
        return None
    xi, _ = to_int_rows(X + Y)
    mat = int_array(xi)
    for v in common:
        i, j = X.index(v), len(X) + Y.index(v)
        keep = [k for k in range(len(xi)) if k != i and k != j]
        if not keep:
            return v, zeros(len(v))
        p, _, _ = wolfe_int(None, mat[keep] - mat[i])
        if any(c != 0 for c in p):
            return v, vec(primitive_rational([-c for c in p]))
    return None


def _zero_slope_result(v, u, d):
    return mpq(0), zeros(d), {"route": "dc", "shortcut": "zero-slope",
                              "vertex": fmt_vec(v), "direction": fmt_vec(u)}


def clarke_dist_polytopes(X: Polytope, Y: Polytope):
    """Clarke distance for the DC local model sigma_X - sigma_Y."""
    a = _translation(X, Y)
    if a is not None:
        dist, wit, cert = _clarke_from_slopes([a], "dc")
        cert["shortcut"] = "translation"
        return dist, wit, cert
    hit = _common_exposed_vertex(X.vertices, Y.vertices)
    if hit is not None:
        return _zero_slope_result(*hit, X.dim)
    return _clarke_from_slopes(clarke_slopes_dc(X, Y), "dc")


def clarke_zero_probe(f: DcFunction, w):
    """Cheap sufficient test for Clarke distance 0; the result triple or None."""
    Y = subdiff_mc(f.g, w)
    cand = subdiff_candidates(f.h, w)
    hit = _common_exposed_vertex(cand, Y.vertices)
    if hit is None:
        return None, cand, Y
    return _zero_slope_result(*hit, Y.dim), cand, Y


def clarke_dist_dc(f: DcFunction, w):
    res, cand, Y = clarke_zero_probe(f, w)
    if res is not None:
        return res
    return clarke_dist_polytopes(reduce_vertices(cand), Y)


def clarke_dist_maxmin(f, w, model: LocalModel | None = None):
    if model is None:
        model = local_model(f, w)
    zero = zeros(model.dim)
    if zero in model.slopes:
        z = model.slopes.index(zero)
        fan = _linearity_fan(model, stop=lambda a: a == z)
        if fan and fan[-1][1] == z:
            cone = fan[-1][0]
            return mpq(0), zero, {"route": "maxmin", "shortcut": "zero-slope",
                                  "direction": fmt_vec(vec(cone.rep_dir()))}
    else:
        fan = _linearity_fan(model)
    slopes = sorted(_ordered_unique(model.slopes[a] for _, a in fan))
    return _clarke_from_slopes(slopes, "maxmin")


def clarke_dist(f, w):
    """(dist_sq, witness, certificate) for the Clarke subdifferential at w."""
    if isinstance(f, MaxMinFormula):
        return clarke_dist_maxmin(f, w)
    if isinstance(f, DcFunction):
        return clarke_dist_dc(f, w)
    raise TypeError(f"unsupported function type {type(f).__name__}")


def clarke_dist_pair(f_dc: DcFunction, f_mm: MaxMinFormula, w):
    """Clarke distance of a function given in both representations.

    The DC zero-slope probe settles distance 0 quickly; otherwise the
    max-min route, which is usually the cheaper full computation.
    """
    res = clarke_zero_probe(f_dc, w)[0]
    return res if res is not None else clarke_dist(f_mm, w)


def frechet_dist_dc(f: DcFunction, w):
    Y = subdiff_mc(f.g, w)
    cand = subdiff_candidates(f.h, w)
    if set(Y.vertices) <= set(cand):
        # Y lies in X = conv(cand), so 0 is in the erosion.
        cert = {"route": "dc", "X_candidates": len(cand), "Y_vertices": len(Y.vertices),
                "containment": "vertices"}
        return mpq(0), zeros(Y.dim), cert
    return frechet_dist_polytopes(reduce_vertices(cand), Y)


def frechet_dist_polytopes(X: Polytope, Y: Polytope, route: str = "dc"):
    """Distance from 0 to the erosion {s : s + Y in X}."""
    d = X.dim
    cert = {"route": route, "X_vertices": len(X.vertices), "Y_vertices": len(Y.vertices)}
    xs = set(X.vertices)
    if all(y in xs for y in Y.vertices):
        cert["containment"] = "vertices"
        return mpq(0), zeros(d), cert
    E = erosion(X, Y)
    cert["constraints"] = len(E.ineqs)
    res = min_norm_hrep(E.ineqs, E.eqs, d)
    if res.status != "optimal":
        cert["farkas"] = [[fmt_vec(E.ineqs[i][0]), fmt_rational(E.ineqs[i][1]), fmt_rational(y)]
                          for i, y in enumerate(res.farkas) if y != 0]
        return INF, None, cert
    return res.dist_sq, res.point, cert


def frechet_dist(f, w):
    if isinstance(f, MaxMinFormula):
        return frechet_dist_maxmin(f, w)
    if isinstance(f, DcFunction):
        return frechet_dist_dc(f, w)
    raise TypeError(f"unsupported function type {type(f).__name__}")


def test(f, w, epsilon=0, notion: str = FRECHET, polarity: str = "yes") -> Verdict:
    """Decide dist(0, subdifferential) <= epsilon (YES) or its complement (NO)."""
    eps = rat(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    if polarity not in ("yes", "no"):
        raise ValueError(f"unknown polarity {polarity!r}")
    w = vec(w)
    if notion == FRECHET:
        dist, wit, cert = frechet_dist(f, w)
    elif notion == CLARKE:
        dist, wit, cert = clarke_dist(f, w)
    else:
        raise ValueError(f"unknown notion {notion!r}")
    return Verdict(notion, eps, dist, wit, cert, polarity)


def is_local_min(f, w) -> bool:
    return test(f, w, 0, FRECHET).yes


def decreasing_direction(f, w) -> RVec | None:
    """A direction u with f(w + t u) < f(w) for small t > 0, or None at a local minimum."""
    w = vec(w)
    if isinstance(f, MaxMinFormula):
        model = local_model(f, w)
        for cone, a in linearity_fan(model):
            for g in cone.generators():
                if dot(model.slopes[a], g) < 0:
                    return vec(g)
        return None
    X, Y = subdiff_mc(f.h, w), subdiff_mc(f.g, w)
    xs = set(X.vertices)
    for y in Y.vertices:
        if y in xs:
            continue
        rows, L = to_int_rows([sub(x, y) for x in X.vertices])
        p, _, _ = wolfe_int(rows)
        if any(c != 0 for c in p):
            # <-p, x> < <-p, y> for every x in X, so sigma_X(-p) < sigma_Y(-p).
            return vec(primitive_rational([-c for c in p]))
    return None


# ---------------------------------------------------------------------------
# Single-max baseline

def _active_flat(t, w):
    pieces = flat_pieces(t)
    vals = [dot(l.x, w) + l.a for l in pieces]
    top = max(vals)
    return sorted(set(l.x for l, v in zip(pieces, vals) if v == top))


def _pair_exposed(i, A, j, B) -> bool:
    rows = [(sub(A[k], A[i]), mpq(-1)) for k in range(len(A)) if k != i]
    rows += [(sub(B[k], B[j]), mpq(-1)) for k in range(len(B)) if k != j]
    if not rows:
        return True
    res = lp_solve(LpProblem(zeros(len(A[i])), tuple(rows)))
    return res.status == OPTIMAL


def single_max_dc_test(h, g, w, epsilon=0, notion: str = FRECHET, polarity: str = "yes") -> Verdict:
    """Baseline test for h, g each a single max of affine pieces.

    Fréchet: erosion of conv A by conv B.  Clarke: exposure LPs over all
    pairs of active slopes.  No tree recursion and no fan construction.
    """
    w = vec(w)
    eps = rat(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    A, B = _active_flat(h, w), _active_flat(g, w)
    if notion == FRECHET:
        X, Y = reduce_vertices(A), reduce_vertices(B)
        E = erosion(X, Y)
        res = min_norm_hrep(E.ineqs, E.eqs, len(w))
        cert = {"route": "single-max", "constraints": len(E.ineqs)}
        if res.status != "optimal":
            return Verdict(notion, eps, INF, None, cert, polarity)
        return Verdict(notion, eps, res.dist_sq, res.point, cert, polarity)
    if notion == CLARKE:
        S = sorted(set(sub(A[i], B[j]) for i in range(len(A)) for j in range(len(B))
                       if _pair_exposed(i, A, j, B)))
        dist, wit, cert = _clarke_from_slopes(S, "single-max")
        return Verdict(notion, eps, dist, wit, cert, polarity)
    raise ValueError(f"unknown notion {notion!r}")
