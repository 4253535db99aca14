"""Timing table for the gadget families."""
from __future__ import annotations

import re
import time
from typing import Sequence

from .gadgets import (Graph, cnn_dc, complete_graph, cycle_graph, gen_clarke_gadget,
                      gen_cnn_losses, gen_frechet_gadget, path_graph)
from .oracle import has_k_clique
from .rational import fmt_rational, zeros
from .subdiff import CLARKE, FRECHET, test

GRAPHS = {"complete": complete_graph, "cycle": cycle_graph, "path": path_graph}
FAMILIES = ("clique-frechet", "clique-clarke", "cnn-frechet", "cnn-clarke")
_NUM = re.compile(r"^-?(\d+)(?:/(\d+))?$")


def parse_range(text: str) -> list[int]:
    """"6..10" or "3" or "2,3"."""
    out = []
    for part in text.split(","):
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def max_bits(obj) -> int:
    """Largest numerator or denominator bit length among rational strings in obj."""
    if isinstance(obj, str):
        m = _NUM.match(obj)
        if not m:
            return 0
        return max(int(m.group(1)).bit_length(), int(m.group(2) or 1).bit_length())
    if isinstance(obj, dict):
        return max((max_bits(v) for v in obj.values()), default=0)
    if isinstance(obj, (list, tuple)):
        return max((max_bits(v) for v in obj), default=0)
    return 0


def default_repr(family: str) -> str:
    """The faster route: DC for clique gadgets, max-min for CNN losses."""
    return "maxmin" if family.startswith("cnn") else "dc"


def build(family: str, G: Graph, k: int, repr_: str):
    if family == "clique-frechet":
        return gen_frechet_gadget(G, k)[repr_], FRECHET
    if family == "clique-clarke":
        return gen_clarke_gadget(G, k)[repr_], CLARKE
    if family in ("cnn-frechet", "cnn-clarke"):
        clarke = family == "cnn-clarke"
        if repr_ == "dc":
            return cnn_dc(G, k, clarke), CLARKE if clarke else FRECHET
        L = gen_cnn_losses(G, k)
        return (L["lc_maxmin"], CLARKE) if clarke else (L["lf_maxmin"], FRECHET)
    raise ValueError(f"unknown family {family!r}")


def bench_row(family: str, graph: str, n: int, k: int, repr_: str | None = None) -> dict:
    repr_ = repr_ or default_repr(family)
    G = GRAPHS[graph](n)
    f, notion = build(family, G, k, repr_)
    dim = f.dim
    t0 = time.perf_counter()
    v = test(f, zeros(dim), 0, notion)
    secs = time.perf_counter() - t0
    cert = v.certificate
    js = v.to_json()
    return {
        "family": family, "graph": graph, "N": n, "k": k, "dim": dim, "repr": repr_,
        "has_clique": has_k_clique(G, k), "dist_sq": fmt_rational(v.dist_sq),
        "seconds": round(secs, 4),
        "cones": cert.get("cells", cert.get("constraints", 0)),
        "vertices": cert.get("X_vertices", cert.get("X_candidates", 0)) + cert.get("Y_vertices", 0),
        "bits": max_bits([js["dist_sq"], js["witness"], cert]),
        "shortcut": cert.get("shortcut", cert.get("containment", "")),
    }


def bench(family: str, n_range: Sequence[int], k_range: Sequence[int],
          graph: str = "complete", repr_: str | None = None) -> list[dict]:
    return [bench_row(family, graph, n, k, repr_) for k in k_range for n in n_range]


def format_table(rows: list[dict]) -> str:
    cols = ["family", "graph", "N", "k", "dim", "repr", "has_clique", "dist_sq",
            "seconds", "cones", "vertices", "bits", "shortcut"]
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(x[i]) for x in cells)) if cells else len(c) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)
