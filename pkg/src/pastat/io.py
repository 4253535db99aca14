"""JSON instances, polytopes and verdicts.

Serialization is canonical: fixed key order, compact separators and every
rational written as a "p/q" or "p" string, so parse followed by serialize
reproduces generated files byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .pa import DcFunction, Leaf, Max, MaxMinFormula, Sum, validate_mc
from .polytope import Polytope
from .rational import INF, fmt_rational, fmt_vec, parse_rational
from .subdiff import Verdict


class ParseError(ValueError):
    """Malformed input; ``where`` is a JSON path or a line/column position."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass(frozen=True)
class Instance:
    function: object
    w: tuple
    epsilon: object
    meta: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.function, self.w, self.epsilon))

    @property
    def dim(self) -> int:
        f = self.function
        return f.dim


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}", e.msg) from None


def _rat(v, where):
    if isinstance(v, bool):
        raise ParseError(where, "expected a rational, got a boolean")
    if isinstance(v, int):
        return parse_rational(str(v))
    if isinstance(v, str):
        try:
            return parse_rational(v)
        except ValueError:
            raise ParseError(where, f"not a rational literal: {v!r}") from None
    raise ParseError(where, f"expected a rational, got {type(v).__name__}")


def _vec(v, where, dim=None):
    if not isinstance(v, list):
        raise ParseError(where, "expected a list")
    if dim is not None and len(v) != dim:
        raise ParseError(where, f"expected {dim} entries, got {len(v)}")
    return tuple(_rat(x, f"{where}[{i}]") for i, x in enumerate(v))


def _get(obj, key, where, kind=None):
    if not isinstance(obj, dict):
        raise ParseError(where, "expected an object")
    if key not in obj:
        raise ParseError(where, f"missing key {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise ParseError(f"{where}.{key}", f"expected {kind.__name__}")
    return v


def _dim(obj, where):
    d = _get(obj, "dim", where)
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ParseError(f"{where}.dim", "expected a positive integer")
    return d


def _tree(node, where, dim):
    op = _get(node, "op", where, str)
    if op == "leaf":
        x = _vec(_get(node, "x", where), f"{where}.x", dim)
        return Leaf(x, _rat(node.get("a", "0"), f"{where}.a"))
    if op in ("sum", "max"):
        kids = _get(node, "children", where, list)
        if not kids:
            raise ParseError(f"{where}.children", "empty")
        ch = tuple(_tree(c, f"{where}.children[{i}]", dim) for i, c in enumerate(kids))
        return Sum(ch) if op == "sum" else Max(ch)
    raise ParseError(f"{where}.op", f"unknown op {op!r}")


def _maxmin(obj, where, dim):
    aff = _get(obj, "affine", where, list)
    pieces = []
    for i, p in enumerate(aff):
        pw = f"{where}.affine[{i}]"
        pieces.append((_vec(_get(p, "x", pw), f"{pw}.x", dim), _rat(p.get("a", "0"), f"{pw}.a")))
    groups = []
    for i, g in enumerate(_get(obj, "groups", where, list)):
        gw = f"{where}.groups[{i}]"
        if not isinstance(g, list) or not g:
            raise ParseError(gw, "expected a nonempty list of indices")
        for k, j in enumerate(g):
            if isinstance(j, bool) or not isinstance(j, int):
                raise ParseError(f"{gw}[{k}]", "expected an integer index")
            if not 0 <= j < len(pieces):
                raise ParseError(f"{gw}[{k}]", f"index {j} out of range 0..{len(pieces) - 1}")
        groups.append(tuple(g))
    if not groups:
        raise ParseError(f"{where}.groups", "empty")
    return MaxMinFormula(dim, tuple(pieces), tuple(groups))


def parse_instance(text: str) -> Instance:
    obj = _loads(text)
    if not isinstance(obj, dict):
        raise ParseError("$", "expected an object")
    dim = _dim(obj, "$")
    model = _get(obj, "model", "$", str)
    if model == "maxmin":
        f = _maxmin(_get(obj, "maxmin", "$"), "$.maxmin", dim)
    elif model == "dc":
        dc = _get(obj, "dc", "$")
        h = _tree(_get(dc, "h", "$.dc"), "$.dc.h", dim)
        g = _tree(_get(dc, "g", "$.dc"), "$.dc.g", dim)
        f = DcFunction(h, g)
    else:
        raise ParseError("$.model", f"unknown model {model!r}")
    q = obj.get("query", {})
    if not isinstance(q, dict):
        raise ParseError("$.query", "expected an object")
    w = _vec(q["w"], "$.query.w", dim) if "w" in q else tuple(parse_rational("0") for _ in range(dim))
    eps = _rat(q.get("epsilon", "0"), "$.query.epsilon")
    if eps < 0:
        raise ParseError("$.query.epsilon", "must be nonnegative")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError("$.meta", "expected an object")
    return Instance(f, w, eps, meta)


def tree_to_json(t) -> dict:
    if isinstance(t, Leaf):
        return {"op": "leaf", "x": fmt_vec(t.x), "a": fmt_rational(t.a)}
    return {"op": "sum" if isinstance(t, Sum) else "max",
            "children": [tree_to_json(c) for c in t.children]}


def instance_to_json(f, w=None, epsilon=0, meta: dict | None = None) -> dict:
    if isinstance(f, MaxMinFormula):
        dim = f.dim
        body = {"model": "maxmin", "maxmin": {
            "affine": [{"x": fmt_vec(x), "a": fmt_rational(a)} for x, a in f.affine],
            "groups": [list(g) for g in f.groups]}}
    elif isinstance(f, DcFunction):
        dim = validate_mc(f.h)
        body = {"model": "dc", "dc": {"h": tree_to_json(f.h), "g": tree_to_json(f.g)}}
    else:
        raise TypeError(f"cannot serialize {type(f).__name__}")
    if w is None:
        w = (0,) * dim
    out = {"dim": dim, **body, "query": {"w": fmt_vec(w), "epsilon": fmt_rational(epsilon)}}
    if meta:
        out["meta"] = meta
    return out


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def serialize_instance(f, w=None, epsilon=0, meta: dict | None = None) -> str:
    if isinstance(f, Instance):
        f, w, epsilon, meta = f.function, f.w, f.epsilon, f.meta
    return dumps(instance_to_json(f, w, epsilon, meta)) + "\n"


def polytope_to_json(P: Polytope) -> dict:
    return {"dim": P.dim, "vertices": [fmt_vec(v) for v in P.vertices]}


def parse_polytope(text: str) -> Polytope:
    obj = _loads(text)
    dim = _dim(obj, "$")
    verts = _get(obj, "vertices", "$", list)
    if not verts:
        raise ParseError("$.vertices", "empty")
    vs = [_vec(v, f"$.vertices[{i}]", dim) for i, v in enumerate(verts)]
    return Polytope(dim, tuple(sorted(set(vs))))


def serialize_polytope(P: Polytope) -> str:
    return dumps(polytope_to_json(P)) + "\n"


def parse_verdict(text_or_obj) -> Verdict:
    obj = _loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    notion = _get(obj, "notion", "$", str)
    eps = _rat(_get(obj, "epsilon", "$"), "$.epsilon")
    d = _get(obj, "dist_sq", "$")
    dist = INF if d == "inf" else _rat(d, "$.dist_sq")
    wit = obj.get("witness")
    wit = None if wit is None else _vec(wit, "$.witness")
    v = Verdict(notion, eps, dist, wit, obj.get("certificate", {}), obj.get("polarity", "yes"))
    if "yes" in obj and obj["yes"] != v.yes:
        raise ParseError("$.yes", "inconsistent with dist_sq and epsilon")
    return v


def serialize_verdict(v: Verdict) -> str:
    return dumps(v.to_json()) + "\n"
