"""The two piecewise-affine input models and their exact local models.

A max-min formula is f(w) = max_i min_{j in M_i} (<x_j, w> + a_j).  An MC
tree is a nested expression of sums and maxima over affine leaves; a DC
function is the difference h - g of two such trees.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from gmpy2 import mpq

from .rational import Rational, RVec, dot, rat, vec


def _check_dim(w, d):
    if len(w) != d:
        raise ValueError(f"point of dimension {len(w)} given to a {d}-dimensional function")


@dataclass(frozen=True)
class Leaf:
    x: RVec
    a: Rational = mpq(0)

    def __post_init__(self):
        object.__setattr__(self, "x", vec(self.x))
        object.__setattr__(self, "a", rat(self.a))


@dataclass(frozen=True)
class Sum:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("Sum node without children")


@dataclass(frozen=True)
class Max:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("Max node without children")


McTree = Union[Leaf, Sum, Max]


def mc_dim(t: McTree) -> int:
    while not isinstance(t, Leaf):
        t = t.children[0]
    return len(t.x)


def mc_depth(t: McTree) -> int:
    """Number of Max levels on the deepest root-to-leaf path."""
    if isinstance(t, Leaf):
        return 0
    inner = max(mc_depth(c) for c in t.children)
    return inner + 1 if isinstance(t, Max) else inner


def mc_leaves(t: McTree):
    if isinstance(t, Leaf):
        yield t
    else:
        for c in t.children:
            yield from mc_leaves(c)


def validate_mc(t: McTree) -> int:
    dims = {len(l.x) for l in mc_leaves(t)}
    if len(dims) != 1:
        raise ValueError("leaves of an MC tree must share one dimension")
    return dims.pop()


def eval_mc(t: McTree, w) -> Rational:
    w = vec(w)
    _check_dim(w, mc_dim(t))
    return _eval_mc(t, w)


def _eval_mc(t, w):
    if isinstance(t, Leaf):
        return dot(t.x, w) + t.a
    vals = [_eval_mc(c, w) for c in t.children]
    return sum(vals, mpq(0)) if isinstance(t, Sum) else max(vals)


@dataclass(frozen=True)
class DcFunction:
    h: McTree
    g: McTree

    def __post_init__(self):
        if validate_mc(self.h) != validate_mc(self.g):
            raise ValueError("h and g have different dimensions")

    @property
    def dim(self) -> int:
        return mc_dim(self.h)


def eval_dc(f: DcFunction, w) -> Rational:
    w = vec(w)
    _check_dim(w, f.dim)
    return _eval_mc(f.h, w) - _eval_mc(f.g, w)


@dataclass(frozen=True)
class MaxMinFormula:
    dim: int
    affine: tuple
    groups: tuple

    def __post_init__(self):
        aff = tuple((vec(x), rat(a)) for x, a in self.affine)
        object.__setattr__(self, "affine", aff)
        object.__setattr__(self, "groups", tuple(tuple(int(j) for j in g) for g in self.groups))
        if not self.groups:
            raise ValueError("a max-min formula needs at least one group")
        for x, _ in aff:
            if len(x) != self.dim:
                raise ValueError("affine piece of wrong dimension")
        for g in self.groups:
            if not g:
                raise ValueError("empty group")
            for j in g:
                if not 0 <= j < len(aff):
                    raise ValueError(f"group index {j} out of range")


def eval_maxmin(f: MaxMinFormula, w) -> Rational:
    w = vec(w)
    _check_dim(w, f.dim)
    vals = [dot(x, w) + a for x, a in f.affine]
    return max(min(vals[j] for j in g) for g in f.groups)


@dataclass(frozen=True)
class LocalModel:
    """phi(u) = max over active groups of min over active slopes of <x_j, u>.

    ``slopes`` is the deduplicated slope set A; ``groups`` index into it.
    ``active_groups`` and ``active_pieces`` record I(w) and J_i(w) in the
    numbering of the source formula.
    """

    dim: int
    slopes: tuple
    groups: tuple
    active_groups: tuple = ()
    active_pieces: tuple = ()

    def __call__(self, u) -> Rational:
        u = vec(u)
        _check_dim(u, self.dim)
        vals = [dot(s, u) for s in self.slopes]
        return max(min(vals[j] for j in g) for g in self.groups)


def make_local_model(dim: int, groups_of_slopes: Sequence[Sequence[RVec]],
                     active_groups=(), active_pieces=()) -> LocalModel:
    """Local model from groups of slope vectors, deduplicating slopes and groups."""
    index: dict = {}
    slopes: list = []
    groups: list = []
    seen = set()
    for g in groups_of_slopes:
        ids = []
        for s in g:
            s = vec(s)
            if s not in index:
                index[s] = len(slopes)
                slopes.append(s)
            ids.append(index[s])
        key = tuple(sorted(set(ids)))
        if key not in seen:
            seen.add(key)
            groups.append(key)
    return LocalModel(dim, tuple(slopes), tuple(groups), tuple(active_groups), tuple(active_pieces))


def local_model(f: MaxMinFormula, w) -> LocalModel:
    w = vec(w)
    _check_dim(w, f.dim)
    vals = [dot(x, w) + a for x, a in f.affine]
    mins = [min(vals[j] for j in g) for g in f.groups]
    top = max(mins)
    active = [i for i, m in enumerate(mins) if m == top]
    pieces = [tuple(j for j in f.groups[i] if vals[j] == mins[i]) for i in active]
    return make_local_model(f.dim, [[f.affine[j][0] for j in js] for js in pieces],
                            active, pieces)


def is_flat(t: McTree) -> bool:
    """A single leaf or a Max of leaves."""
    return isinstance(t, Leaf) or (isinstance(t, Max) and all(isinstance(c, Leaf) for c in t.children))


def flat_pieces(t: McTree) -> list[Leaf]:
    if not is_flat(t):
        raise ValueError("expression is not a flat max of affine pieces")
    return [t] if isinstance(t, Leaf) else list(t.children)
