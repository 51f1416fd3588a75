"""Command-line front end: ``ftoracle gen|build|query|verify|bench``."""

from __future__ import annotations

import argparse
import csv
import sys
import time

from . import generators
from .errors import OracleError
from .graph import parse_graph
from .harness import BENCH_COLUMNS, DEFAULT_BOUNDS, bench_row, build_oracle, answer, verify_kind
from .serialize import KINDS, dumps, loads


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "gnm":
        g = generators.gnm(args.n, args.m, not args.undirected, args.seed)
    elif fam == "layered-dag":
        g = generators.layered_dag(args.layers, args.width, args.p, args.seed)
    elif fam == "star-forest":
        stars = args.stars if args.stars is not None else args.k + 1
        leaves = args.leaves if args.leaves is not None else args.f
        g = generators.star_forest(stars, leaves)
    else:
        g = generators.c4_pendant()
    _write(args.output, g.to_text())
    return 0


def cmd_build(args) -> int:
    g = parse_graph(_read(args.graph))
    cover = [int(x) for x in args.cover.split(",")] if args.cover else None
    t0 = time.perf_counter()
    oracle, meta = build_oracle(
        args.kind,
        g,
        args.f,
        args.k,
        s=args.source,
        seed=args.seed,
        vertex_faults=args.vertex_faults,
        backend=args.backend,
        cover=cover,
    )
    if args.mode and args.kind == "kpath-tree":
        oracle.mode = args.mode
    text = dumps(args.kind, oracle, meta)
    _write(args.output, text + "\n")
    if args.kind == "preserver" and args.edges_out:
        _write(args.edges_out, "\n".join(map(str, sorted(oracle.kept))) + "\n")
    print(f"built {args.kind} in {time.perf_counter() - t0:.3f}s, {len(text)} bytes", file=sys.stderr)
    return 0


def cmd_query(args) -> int:
    kind, oracle, meta = loads(_read(args.oracle))
    out = [answer(kind, oracle, meta, line) for line in _read(args.failures).splitlines()]
    _write(args.output, "".join(a + "\n" for a in out))
    return 0


def cmd_verify(args) -> int:
    kinds = list(KINDS) if args.kind == "all" else [args.kind]
    ok = True
    for kind in kinds:
        rep = verify_kind(kind, seed=args.seed, trials=args.trials, f=args.f, k=args.k)
        print(rep.line())
        for ex in rep.examples:
            print(f"  mismatch {ex}")
        ok &= rep.ok
    return 0 if ok else 1


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",")]
    w = csv.DictWriter(sys.stdout, fieldnames=BENCH_COLUMNS, delimiter="\t", lineterminator="\n")
    w.writeheader()
    for n in sizes:
        m = args.m if args.m is not None else 2 * n
        w.writerow(bench_row(args.kind, n, m, args.f, args.k, args.seed, args.queries))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ftoracle", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("family", choices=generators.FAMILIES)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--layers", type=int, default=4)
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--stars", type=int)
    p.add_argument("--leaves", type=int)
    p.add_argument("-k", type=int, default=1)
    p.add_argument("-f", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build an oracle file")
    p.add_argument("kind", choices=list(KINDS))
    p.add_argument("graph")
    p.add_argument("-f", type=int, required=True)
    p.add_argument("-k", type=int, default=0)
    p.add_argument("-s", "--source", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertex-faults", action="store_true")
    p.add_argument("--backend", choices=("bfs", "algebraic"), default="bfs")
    p.add_argument("--cover", help="comma-separated vertex cover for vc-dso")
    p.add_argument("--mode", choices=("path-dictionary", "failure-dictionary"))
    p.add_argument("--edges-out", help="preserver: also write kept edge ids here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer one query per line of a failure file")
    p.add_argument("oracle")
    p.add_argument("failures")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="sweep an oracle kind against brute force")
    p.add_argument("kind", choices=list(DEFAULT_BOUNDS) + ["all"])
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-f", type=int)
    p.add_argument("-k", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="TSV table of build time, size and query latency")
    p.add_argument("kind", choices=list(KINDS))
    p.add_argument("--sizes", default="8,12,16")
    p.add_argument("--m", type=int)
    p.add_argument("-f", type=int, default=1)
    p.add_argument("-k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--queries", type=int, default=50)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OracleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
