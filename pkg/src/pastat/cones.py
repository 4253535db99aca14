"""Polyhedral cones by double description, and fan refinement.

A :class:`Cone` is kept in both representations at once: integer rows h
(meaning <h, u> >= 0) and integer generators (extreme rays modulo the
lineality space, plus a basis of that space).  Each ray carries a bitmask
of the rows it is tight on, so adding a half-space uses the combinatorial
adjacency test and never solves a linear program.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from gmpy2 import mpq

from .rational import RVec, int_array, primitive, primitive_rational, vec


def _idot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


class Cone:
    __slots__ = ("dim", "rows", "rays", "masks", "lines")

    def __init__(self, dim, rows, rays, masks, lines):
        self.dim = dim
        self.rows = rows
        self.rays = rays
        self.masks = masks
        self.lines = lines

    @classmethod
    def whole(cls, d: int) -> "Cone":
        lines = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        return cls(d, [], [], [], lines)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], d: int) -> "Cone":
        """Cone {u : <h, u> >= 0 for all rows}, assumed full-dimensional."""
        cone = cls.whole(d)
        for h in rows:
            hi = primitive_rational(h)
            if any(hi) and cone.cuts(hi):
                cone = cone.intersect(hi)
            else:
                cone = cone.with_redundant_row(hi)
        return cone

    def rep_dir(self) -> tuple[int, ...]:
        """A point of the interior: the sum of the extreme rays."""
        if not self.rays:
            return self.lines[0]
        return tuple(sum(col) for col in zip(*self.rays))

    def generators(self) -> list[tuple[int, ...]]:
        """Rays plus both orientations of every lineality basis vector."""
        return self.rays + self.lines + [tuple(-x for x in l) for l in self.lines]

    def generator_matrix(self) -> np.ndarray:
        return int_array(self.generators(), self.dim)

    def cuts(self, h) -> bool:
        if any(_idot(h, l) != 0 for l in self.lines):
            return True
        pos = neg = False
        for r in self.rays:
            v = _idot(h, r)
            if v > 0:
                pos = True
            elif v < 0:
                neg = True
            if pos and neg:
                return True
        return False

    def with_redundant_row(self, h) -> "Cone":
        bit = 1 << len(self.rows)
        masks = [m | bit if _idot(h, r) == 0 else m for m, r in zip(self.masks, self.rays)]
        return Cone(self.dim, self.rows + [tuple(h)], list(self.rays), masks, list(self.lines))

    def intersect(self, h) -> "Cone":
        """Cone intersected with {<h, u> >= 0}; h must cut the cone."""
        h = tuple(int(x) for x in h)
        bit = 1 << len(self.rows)
        rows = self.rows + [h]
        hl = [_idot(h, l) for l in self.lines]
        piv = next((i for i, v in enumerate(hl) if v != 0), None)
        if piv is not None:
            l0, v0 = self.lines[piv], hl[piv]
            s0 = 1 if v0 > 0 else -1
            lines = [primitive([v0 * a - hl[i] * b for a, b in zip(l, l0)])
                     for i, l in enumerate(self.lines) if i != piv]
            rays = []
            for r in self.rays:
                hr = _idot(h, r)
                rays.append(primitive([abs(v0) * a - s0 * hr * b for a, b in zip(r, l0)]))
            masks = [m | bit for m in self.masks]
            rays.append(tuple(s0 * b for b in l0))
            masks.append(bit - 1)
            return Cone(self.dim, rows, rays, masks, lines)

        vals = [_idot(h, r) for r in self.rays]
        rays, masks = [], []
        pos, neg = [], []
        for i, v in enumerate(vals):
            if v > 0:
                rays.append(self.rays[i])
                masks.append(self.masks[i])
                pos.append(i)
            elif v == 0:
                rays.append(self.rays[i])
                masks.append(self.masks[i] | bit)
            else:
                neg.append(i)
        need = self.dim - len(self.lines) - 2
        old_masks = self.masks
        n_old = len(old_masks)
        for i in pos:
            mi = old_masks[i]
            for j in neg:
                common = mi & old_masks[j]
                if common.bit_count() < need:
                    continue
                adjacent = True
                for k in range(n_old):
                    if k != i and k != j and (old_masks[k] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vi, vj = vals[i], vals[j]
                ri, rj = self.rays[i], self.rays[j]
                rays.append(primitive([vi * b - vj * a for a, b in zip(ri, rj)]))
                masks.append(common | bit)
        return Cone(self.dim, rows, rays, masks, list(self.lines))

    def split(self, h) -> tuple["Cone", "Cone"]:
        h = tuple(int(x) for x in h)
        if not self.cuts(h):
            raise ValueError("hyperplane does not cut the cone")
        return self.intersect(h), self.intersect(tuple(-x for x in h))

    def contains(self, u, strict: bool = False) -> bool:
        ui = primitive_rational(u)
        for h in self.rows:
            v = _idot(h, ui)
            if v < 0 or (strict and v == 0):
                return False
        return True


@dataclass(frozen=True)
class ConeCell:
    """A full-dimensional cone K = {u : B u >= 0} of a fan."""

    sign_vector: tuple
    B: tuple
    rep_dir: RVec
    slope: RVec | None = None
    extreme_rays: tuple | None = None
    cone: Cone | None = None

    @classmethod
    def from_cone(cls, cone: Cone, sign_vector=(), slope=None) -> "ConeCell":
        return cls(tuple(sign_vector), tuple(vec(h) for h in cone.rows),
                   vec(cone.rep_dir()), slope,
                   tuple(vec(g) for g in cone.generators()), cone)


def dedup_hyperplanes(normals: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Primitive integer normals, one per hyperplane (up to nonzero scaling)."""
    seen, out = set(), []
    for n in normals:
        p = primitive_rational(n)
        if not any(p):
            continue
        first = next(x for x in p if x != 0)
        if first < 0:
            p = tuple(-x for x in p)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def enumerate_cones(normals: Sequence[Sequence], dim: int) -> list[ConeCell]:
    """All full-dimensional cells of a central hyperplane arrangement."""
    hyps = dedup_hyperplanes(normals)
    cells: list[tuple[Cone, tuple]] = [(Cone.whole(dim), ())]
    for h in hyps:
        nxt = []
        for cone, signs in cells:
            if cone.cuts(h):
                plus, minus = cone.split(h)
                nxt.append((plus, signs + ("+",)))
                nxt.append((minus, signs + ("-",)))
            else:
                s = "+" if _idot(h, cone.rep_dir()) > 0 else "-"
                nxt.append((cone, signs + (s,)))
        cells = nxt
    cells.sort(key=lambda c: c[1])
    return [ConeCell.from_cone(c, s) for c, s in cells]


def extreme_rays(cell) -> list[RVec]:
    """Primitive integer generators of a full-dimensional cone, lineality as +/- pairs."""
    if isinstance(cell, ConeCell):
        rows, d = cell.B, len(cell.rep_dir)
    else:
        rows, d = cell
    cone = Cone.from_rows(rows, d)
    return [tuple(mpq(x) for x in g) for g in cone.generators()]


Decision = Callable[[Cone], tuple]


def refine_fan(dim: int, decide: Decision, root: Cone | None = None,
               stop: Callable[[object], bool] | None = None) -> list[tuple[Cone, object]]:
    """Split cones until ``decide`` accepts each one.

    ``decide(cone)`` returns ("leaf", label) or ("split", h) with h a
    primitive integer normal cutting the cone.  Every hyperplane used on a
    path cuts the cone it splits, so depth is bounded by the number of
    distinct hyperplanes ``decide`` can return.  If ``stop(label)`` is
    true for an accepted cone, refinement ends there and the cones found so
    far are returned, the stopping one last.
    """
    stack = [root if root is not None else Cone.whole(dim)]
    out = []
    while stack:
        cone = stack.pop()
        kind, val = decide(cone)
        if kind == "leaf":
            out.append((cone, val))
            if stop is not None and stop(val):
                break
        else:
            plus, minus = cone.split(val)
            stack.append(minus)
            stack.append(plus)
    return out
