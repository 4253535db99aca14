"""pastat command line.

Exit codes: 0 when the requested polarity holds (or an audit matches),
1 when it fails, 2 on input errors.
"""
from __future__ import annotations

import argparse
import contextlib
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from . import oracle
from .gadgets import parse_graph
from .io import ParseError, dumps, parse_instance, serialize_instance
from .rational import fmt_rational, parse_rational
from .subdiff import CLARKE, FRECHET, test

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _load_instance(path: str):
    try:
        return parse_instance(_read(path))
    except (ParseError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _report(verdict, as_json: bool, out=None) -> int:
    out = out or sys.stdout
    if as_json:
        print(dumps(verdict.to_json()), file=out)
    else:
        pol = "holds" if verdict.holds else "fails"
        print(f"{verdict.notion} dist_sq={fmt_rational(verdict.dist_sq)} "
              f"epsilon={fmt_rational(verdict.epsilon)} {verdict.polarity.upper()} {pol}", file=out)
    return EXIT_HOLDS if verdict.holds else EXIT_FAILS


def cmd_test(args) -> int:
    f, w, eps = _load_instance(args.instance)
    if args.epsilon is not None:
        try:
            eps = parse_rational(args.epsilon)
        except ValueError as e:
            raise InputError(str(e)) from None
        if eps < 0:
            raise InputError("epsilon must be nonnegative")
    return _report(test(f, w, eps, args.notion, args.polarity), args.json)


def cmd_localmin(args) -> int:
    f, w, _ = _load_instance(args.instance)
    v = test(f, w, 0, FRECHET, "yes")
    if not args.json:
        print("local minimum" if v.holds else "not a local minimum")
        return EXIT_HOLDS if v.holds else EXIT_FAILS
    return _report(v, True)


def cmd_gen(args) -> int:
    try:
        G = parse_graph(_read(args.graph))
    except ValueError as e:
        raise InputError(f"{args.graph}: {e}") from None
    if args.k < 2:
        raise InputError("k must be at least 2")
    reprs = ["maxmin", "dc"] if args.repr == "both" else [args.repr]
    meta = {"source": "clique" if args.family.startswith("clique") else "cnn",
            "family": args.family, "N": G.n, "k": args.k,
            "has_clique": oracle.has_k_clique(G, args.k)}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for r in reprs:
        f, _ = bench_mod.build(args.family, G, args.k, r)
        path = out / f"{args.family}-{r}.json"
        path.write_text(serialize_instance(f, None, 0, meta))
        print(path)
    return EXIT_HOLDS


def cmd_audit(args) -> int:
    seed = int(os.environ.get("PASTAT_SEED", "0"))

    def records():
        if args.sweep in ("graphs", "all"):
            yield from oracle.audit_graphs(args.max_n)
        if args.sweep in ("polytopes", "all"):
            yield from oracle.audit_polytopes(args.max_d, args.count, seed)

    bad = 0
    ctx = oracle.inject_fault() if args.inject_fault else contextlib.nullcontext()
    with ctx:
        for rec in records():
            if not args.quiet:
                print(dumps(rec))
            if not rec["match"]:
                bad += 1
                print("mismatch: " + dumps(rec), file=sys.stderr)
    print(f"audit: {bad} mismatches", file=sys.stderr)
    return EXIT_HOLDS if bad == 0 else EXIT_FAILS


def cmd_bench(args) -> int:
    try:
        ns, ks = bench_mod.parse_range(args.n_range), bench_mod.parse_range(args.k_range)
    except ValueError:
        raise InputError("ranges look like 6..10 or 2,3") from None
    rows = []
    for k in ks:
        for n in ns:
            row = bench_mod.bench_row(args.family, args.graph, n, k, args.repr)
            rows.append(row)
            if args.json:
                print(dumps(row), flush=True)
    if not args.json:
        print(bench_mod.format_table(rows))
    return EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pastat", description="Exact stationarity tests for piecewise-affine functions.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="decide dist(0, subdifferential) <= epsilon")
    t.add_argument("instance")
    t.add_argument("--notion", choices=[FRECHET, CLARKE], default=FRECHET)
    t.add_argument("--polarity", choices=["yes", "no"], default="yes")
    t.add_argument("--epsilon", help="rational p/q; overrides the instance query")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_test)

    lm = sub.add_parser("localmin", help="is the query point a local minimizer")
    lm.add_argument("instance")
    lm.add_argument("--json", action="store_true")
    lm.set_defaults(func=cmd_localmin)

    g = sub.add_parser("gen", help="write gadget instances for a graph")
    g.add_argument("--family", choices=bench_mod.FAMILIES, required=True)
    g.add_argument("--graph", required=True, help="edge list file: 'N M' then M lines 'u v'")
    g.add_argument("-k", type=int, required=True)
    g.add_argument("--repr", choices=["maxmin", "dc", "both"], default="both")
    g.add_argument("--out", default=".")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("audit", help="engine against brute-force oracles")
    a.add_argument("--sweep", choices=["graphs", "polytopes", "all"], default="all")
    a.add_argument("--max-n", type=int, default=4)
    a.add_argument("--max-d", type=int, default=3)
    a.add_argument("--count", type=int, default=60)
    a.add_argument("--quiet", action="store_true", help="only report mismatches")
    a.add_argument("--inject-fault", action="store_true", help="negative control")
    a.set_defaults(func=cmd_audit)

    b = sub.add_parser("bench", help="timing table for a gadget family")
    b.add_argument("--family", choices=bench_mod.FAMILIES, default="clique-frechet")
    b.add_argument("--n-range", default="3..6")
    b.add_argument("--k-range", default="2")
    b.add_argument("--graph", choices=sorted(bench_mod.GRAPHS), default="complete")
    b.add_argument("--repr", choices=["maxmin", "dc"],
                   help="default: dc for clique families, maxmin for cnn families")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_HOLDS
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
