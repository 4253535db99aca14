"""k-Clique gadgets and shallow-CNN losses as PA instance generators.

All gadgets live in R^{2k} (or R^{2k+1} with a trailing coordinate t),
split into k planar blocks z_1..z_k.  Vertex v of the graph is the moment
point p_v = (v, v^2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Sequence

from gmpy2 import mpq

from .pa import DcFunction, Leaf, Max, MaxMinFormula, Sum
from .rational import Rational, RVec, dot, rat, vec

HALF = mpq(1, 2)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        es = set()
        for e in self.edges:
            u, v = sorted(int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u and v <= self.n):
                raise ValueError(f"edge {u} {v} outside 1..{self.n}")
            es.add((u, v))
        object.__setattr__(self, "edges", frozenset(es))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def padded(self, n: int) -> "Graph":
        return self if self.n >= n else Graph(n, self.edges)

    def to_text(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"] + [f"{u} {v}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Edge-list text: first line "N M", then M lines "u v"."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise ValueError("graph header must be 'N M'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = []
        for r in rows[1:]:
            if len(r) != 2:
                raise ValueError
            edges.append((int(r[0]), int(r[1])))
    except ValueError:
        raise ValueError("graph lines must hold two integers") from None
    if len(edges) != m:
        raise ValueError(f"header announces {m} edges, found {len(edges)}")
    if len(set(tuple(sorted(e)) for e in edges)) != m:
        raise ValueError("duplicate edge")
    return Graph(n, frozenset(edges))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(1, n + 1), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((v, v + 1) for v in range(1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, frozenset(tuple(sorted((v, v % n + 1))) for v in range(1, n + 1)))


def moment_points(N: int) -> list[RVec]:
    if N < 2:
        raise ValueError("moment_points needs N >= 2")
    return [(mpq(v), mpq(v * v)) for v in range(1, N + 1)]


def forb_pairs(G: Graph, N: int | None = None) -> list[tuple[int, int]]:
    """Ordered pairs (u, v) with u = v or {u, v} not an edge, sorted."""
    N = G.n if N is None else N
    return [(u, v) for u in range(1, N + 1) for v in range(1, N + 1)
            if u == v or not G.adjacent(u, v)]


def _embed(dim: int, block: int, p) -> RVec:
    out = [mpq(0)] * dim
    out[2 * block] = rat(p[0])
    out[2 * block + 1] = rat(p[1])
    return tuple(out)


def _t(dim: int, c) -> RVec:
    out = [mpq(0)] * dim
    out[-1] = rat(c)
    return tuple(out)


def _add(*vs) -> RVec:
    return tuple(sum(xs, mpq(0)) for xs in zip(*vs))


def _diff(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _branches(G: Graph, k: int, N: int):
    """(i, j, u, v) for block pairs i < j (0-based) and (u, v) in Forb."""
    forb = forb_pairs(G, N)
    return [(i, j, u, v) for i, j in combinations(range(k), 2) for u, v in forb]


class _Pieces:
    """Deduplicating store of affine pieces with zero offset."""

    def __init__(self):
        self.index: dict = {}
        self.affine: list = []

    def id(self, slope: RVec) -> int:
        j = self.index.get(slope)
        if j is None:
            j = len(self.affine)
            self.index[slope] = j
            self.affine.append((slope, mpq(0)))
        return j


def _frechet_groups(G, k, N, dim, extra: RVec | None):
    P = moment_points(N)
    store = _Pieces()
    groups = []
    for i, j, u, v in _branches(G, k, N):
        g = []
        for a in range(N):
            for b in range(N):
                s = _add(_embed(dim, i, _diff(P[u - 1], P[a])), _embed(dim, j, _diff(P[v - 1], P[b])))
                if extra is not None:
                    s = _add(s, extra)
                g.append(store.id(s))
        groups.append(tuple(g))
    return store, groups


def _block_trees(k, N, dim):
    P = moment_points(N)
    leaves = [[Leaf(_embed(dim, r, P[a])) for a in range(N)] for r in range(k)]
    sigma = [Max(tuple(leaves[r])) for r in range(k)]
    fixed = [[Max((leaves[r][a],)) for a in range(N)] for r in range(k)]
    return sigma, fixed


def _psi(alpha, sigma, fixed, k):
    i, j, u, v = alpha
    return [fixed[r][u - 1] if r == i else fixed[r][v - 1] if r == j else sigma[r] for r in range(k)]


def _pad(G: Graph, k: int) -> tuple[Graph, int]:
    if k < 2:
        raise ValueError("gadgets need k >= 2")
    N = max(G.n, 3)
    return G.padded(N), N


def gen_frechet_gadget(G: Graph, k: int) -> dict:
    """f_F(z) = max over i<j, (u,v) in Forb of min over a,b of
    <p_u - p_a, z_i> + <p_v - p_b, z_j>, in max-min and DC form."""
    G, N = _pad(G, k)
    dim = 2 * k
    store, groups = _frechet_groups(G, k, N, dim, None)
    maxmin = MaxMinFormula(dim, tuple(store.affine), tuple(groups))
    sigma, fixed = _block_trees(k, N, dim)
    g = Sum(tuple(sigma))
    h = Max(tuple(Sum(tuple(_psi(al, sigma, fixed, k))) for al in _branches(G, k, N)))
    return {"maxmin": maxmin, "dc": DcFunction(h, g)}


def gen_clarke_gadget(G: Graph, k: int) -> dict:
    """Seesaw f_C(z, t) = t/2 + max{f_F(z), -|t|/2} = max{f_F(z) + t/2, min{t, 0}}."""
    G, N = _pad(G, k)
    dim = 2 * k + 1
    store, groups = _frechet_groups(G, k, N, dim, _t(dim, HALF))
    groups.append((store.id(_t(dim, 1)), store.id(_t(dim, 0))))
    maxmin = MaxMinFormula(dim, tuple(store.affine), tuple(groups))
    sigma, fixed = _block_trees(k, N, dim)
    t_leaves = [Leaf(_t(dim, 0)), Leaf(_t(dim, 1))]
    g = Sum(tuple(sigma) + (Max((Leaf(_t(dim, HALF)), Leaf(_t(dim, -HALF)))),))
    branches = [Sum(tuple(_psi(al, sigma, fixed, k)) + (tl,))
                for al in _branches(G, k, N) for tl in t_leaves]
    branches.append(Sum(tuple(sigma) + (Leaf(_t(dim, HALF)),)))
    return {"maxmin": maxmin, "dc": DcFunction(Max(tuple(branches)), g)}


# ---------------------------------------------------------------------------
# CNN losses

def neighbors(u: int, N: int) -> list[int]:
    return [a for a in (u - 1, u + 1) if 1 <= a <= N]


def relu(x):
    return x if x > 0 else mpq(0)


def relu_penalty(u: int, s, N: int) -> Rational:
    """P_u(s) = sum over a adjacent to u on the path 1..N of ReLU(<p_a - p_u, s>)."""
    if not 1 <= u <= N:
        raise ValueError(f"vertex {u} outside 1..{N}")
    P = moment_points(N)
    s = vec(s)
    return sum((relu(dot(_diff(P[a - 1], P[u - 1]), s)) for a in neighbors(u, N)), mpq(0))


@dataclass(frozen=True)
class CnnNet:
    """Flat description of a one-hidden-layer ReLU network with max pooling.

    Each site computes ReLU(<channel, theta>); a branch reads out a linear
    combination of its sites; each pooling group takes the max of its
    branches; the output is the sum over pooling groups plus <head, theta>.
    """

    dim: int
    sites: tuple                   # (channel vector, branch tag)
    readouts: dict                 # branch tag -> ((site index, coefficient), ...)
    pooling: tuple                 # tuples of branch tags
    affine_head: RVec = ()

    def __post_init__(self):
        if not self.affine_head:
            object.__setattr__(self, "affine_head", (mpq(0),) * self.dim)


def cnn_forward(net: CnnNet, theta) -> Rational:
    theta = vec(theta)
    if len(theta) != net.dim:
        raise ValueError("parameter vector of wrong dimension")
    act = [relu(dot(c, theta)) for c, _ in net.sites]
    branch = {tag: sum((coef * act[i] for i, coef in rd), mpq(0)) for tag, rd in net.readouts.items()}
    pooled = sum((max(branch[t] for t in grp) for grp in net.pooling), mpq(0))
    return pooled + dot(net.affine_head, theta)


def _cnn_net(G, k, N, dim, clarke: bool) -> CnnNet:
    P = moment_points(N)
    sites, readouts, tags = [], {}, []
    for al in _branches(G, k, N):
        i, j, u, v = al
        rd = []
        for a in neighbors(u, N):
            rd.append((len(sites), mpq(-1)))
            sites.append((_embed(dim, i, _diff(P[a - 1], P[u - 1])), al))
        for b in neighbors(v, N):
            rd.append((len(sites), mpq(-1)))
            sites.append((_embed(dim, j, _diff(P[b - 1], P[v - 1])), al))
        readouts[al] = tuple(rd)
        tags.append(al)
    head = (mpq(0),) * dim
    if clarke:
        rd = []
        for c in (1, -1):
            rd.append((len(sites), -HALF))
            sites.append((_t(dim, c), "t"))
        readouts["t"] = tuple(rd)
        tags.append("t")
        head = _t(dim, HALF)
    return CnnNet(dim, tuple(sites), readouts, (tuple(tags),), head)


def _cnn_groups(G, k, N, dim, extra):
    P = moment_points(N)
    store = _Pieces()
    groups = []
    for i, j, u, v in _branches(G, k, N):
        nu, nv = neighbors(u, N), neighbors(v, N)
        g = []
        for om in product((0, 1), repeat=len(nu)):
            for ta in product((0, 1), repeat=len(nv)):
                parts = [_embed(dim, i, _diff(P[a - 1], P[u - 1])) for a, o in zip(nu, om) if o]
                parts += [_embed(dim, j, _diff(P[b - 1], P[v - 1])) for b, o in zip(nv, ta) if o]
                s = tuple(-x for x in _add((mpq(0),) * dim, *parts))
                if extra is not None:
                    s = _add(s, extra)
                g.append(store.id(s))
        groups.append(tuple(g))
    return store, groups


def gen_cnn_losses(G: Graph, k: int) -> dict:
    """Fréchet loss L^F, Clarke loss L^C: closed forms, max-min forms and networks."""
    if k < 2:
        raise ValueError("CNN losses need k >= 2")
    N = max(G.n, 2)
    G = G.padded(N)
    branches = _branches(G, k, N)
    P = moment_points(N)

    def lf(z) -> Rational:
        z = vec(z)
        if len(z) != 2 * k:
            raise ValueError("point of wrong dimension")
        return max(-relu_penalty(u, z[2 * i:2 * i + 2], N) - relu_penalty(v, z[2 * j:2 * j + 2], N)
                   for i, j, u, v in branches)

    def lc(zt) -> Rational:
        zt = vec(zt)
        if len(zt) != 2 * k + 1:
            raise ValueError("point of wrong dimension")
        t = zt[-1]
        return t / 2 + max(lf(zt[:-1]), -abs(t) / 2)

    dim_f, dim_c = 2 * k, 2 * k + 1
    store_f, groups_f = _cnn_groups(G, k, N, dim_f, None)
    store_c, groups_c = _cnn_groups(G, k, N, dim_c, _t(dim_c, HALF))
    groups_c.append((store_c.id(_t(dim_c, 1)), store_c.id(_t(dim_c, 0))))
    return {
        "lf_closed": lf,
        "lc_closed": lc,
        "lf_maxmin": MaxMinFormula(dim_f, tuple(store_f.affine), tuple(groups_f)),
        "lc_maxmin": MaxMinFormula(dim_c, tuple(store_c.affine), tuple(groups_c)),
        "net_f": _cnn_net(G, k, N, dim_f, False),
        "net_c": _cnn_net(G, k, N, dim_c, True),
    }


def cnn_dc(G: Graph, k: int, clarke: bool = False) -> DcFunction:
    """DC form of L^F (or L^C) via max_a(-R_a) = max_a(sum_{b != a} R_b) - sum_b R_b."""
    N = max(G.n, 2)
    G = G.padded(N)
    dim = 2 * k + (1 if clarke else 0)
    net = _cnn_net(G, k, N, dim, clarke)
    zero = Leaf((mpq(0),) * dim)
    terms = []
    for tag in net.pooling[0]:
        rd = net.readouts[tag]
        if tag == "t":
            # -1/2 ReLU(t) - 1/2 ReLU(-t) = -|t|/2
            terms.append(Max((Leaf(_t(dim, HALF)), Leaf(_t(dim, -HALF)))))
        else:
            terms.append(Sum(tuple(Max((zero, Leaf(net.sites[i][0]))) for i, _ in rd)))
    g = Sum(tuple(terms))
    branches = []
    for a in range(len(terms)):
        rest = tuple(terms[:a] + terms[a + 1:])
        branches.append(Sum(rest) if rest else zero)
    h = Max(tuple(branches))
    if clarke:
        h = Sum((h, Leaf(net.affine_head)))
    return DcFunction(h, g)


def clique_direction(clique: Sequence[int], k: int, T=2) -> RVec:
    """z with z_i = T * (2 c_i, -1); exposes the clique tuple (p_{c_1}, ..., p_{c_k})."""
    out = []
    for c in clique:
        out += [rat(T) * 2 * c, -rat(T)]
    return tuple(out)
