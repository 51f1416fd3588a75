"""Build, query, verify and benchmark any oracle kind by name.

This is the layer under the CLI; the acceptance tests drive it directly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any, Iterator

from . import groundtruth as gt
from .detour import (
    build_detour_oracle,
    build_preserver,
    preserver_bound,
    query_detour,
    verify_preserver,
)
from .errors import OracleError
from .fieldreach import build_field_oracle, query_reach
from .generators import gnm
from .graph import INF, Graph, bfs_distance, bfs_levels, failure_sets, split_with_hub
from .kpath import KPath, SolverConfig
from .kpath_sampling import build_sampling_oracle, query_sampling, r_count
from .kpath_tree import build_tree_oracle, node_bound, query_tree
from .serialize import KINDS, dumps, loads
from .vc import (
    build_kernel_oracle,
    build_subset_oracle,
    build_vctree_oracle,
    query_kernel_oracle,
    query_subset_oracle,
    query_vctree_oracle,
    vc_solve,
)
from .vc_dso import build_vc_dso, query_vc_dso

KPATH_KINDS = ("kpath-tree", "kpath-sample")
VC_KINDS = ("vc-subset", "vc-tree", "vc-kernel")


class UsageError(OracleError, ValueError):
    pass


def smallest_cover(g: Graph) -> list[int]:
    """Minimum vertex cover of the undirected shadow of ``g``."""
    shadow = g if not g.directed else Graph(g.n, {(min(u, v), max(u, v)) for u, v in g.edges}, False)
    k = 0
    while True:
        c = vc_solve(shadow, k)
        if c is not None:
            return sorted(c)
        k += 1


def build_oracle(
    kind: str,
    g: Graph,
    f: int,
    k: int,
    s: int = 0,
    seed: int | None = 0,
    vertex_faults: bool = False,
    backend: str = "bfs",
    cover: list[int] | None = None,
    solver: SolverConfig | None = None,
) -> tuple[Any, dict]:
    """Build oracle ``kind``; returns ``(oracle, meta)`` where meta rides in the file envelope."""
    if kind not in KINDS:
        raise UsageError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    meta: dict = {"f": f, "k": k}
    if vertex_faults:
        if kind not in KPATH_KINDS:
            raise UsageError(f"--vertex-faults is only supported for {', '.join(KPATH_KINDS)}")
        hub_graph, smap = split_with_hub(g)
        meta.update(vertex_faults=True, n=g.n, bridges=[b for _, _, b in smap.forward])
        g, k = hub_graph, 2 * k + 1
    if kind == "kpath-tree":
        return build_tree_oracle(g, f, k, solver), meta
    if kind == "kpath-sample":
        return build_sampling_oracle(g, f, k, seed, solver), meta
    if kind == "vc-subset":
        return build_subset_oracle(g, f, k), meta
    if kind == "vc-tree":
        return build_vctree_oracle(g, f, k), meta
    if kind == "vc-kernel":
        return build_kernel_oracle(g, f, k), meta
    if kind == "vc-dso":
        cover = smallest_cover(g) if cover is None else cover
        return build_vc_dso(g, cover, f), meta
    if kind == "preserver":
        meta.update(graph=g.to_dict())
        return build_preserver(g, s, f, k), meta
    if kind == "detour":
        return build_detour_oracle(g, s, k, backend, f, seed), meta
    if kind == "reach":
        return build_field_oracle(g, seed), meta
    raise AssertionError(kind)


def _fmt_dist(d: float) -> str:
    return "inf" if d == INF else str(int(d))


def _split_query(line: str, lead: int) -> tuple[list[int], frozenset[int]]:
    if ":" in line:
        head, tail = line.split(":", 1)
    else:
        toks = line.split()
        head, tail = " ".join(toks[:lead]), " ".join(toks[lead:])
    ids = [int(t) for t in head.split()]
    if len(ids) != lead:
        raise UsageError(f"expected {lead} vertex id(s) before ':' in query {line!r}")
    return ids, frozenset(int(t) for t in tail.split())


def _project_witness(path: KPath, n: int, k: int) -> list[int]:
    # a used bridge v_in -> v_out marks original vertex v
    verts = [a for a, b in zip(path.vertices, path.vertices[1:]) if a < n and b == a + n]
    return verts[:k]


def answer(kind: str, oracle: Any, meta: dict, line: str) -> str:
    """Answer one query line for an oracle of ``kind``."""
    if kind in KPATH_KINDS:
        failed = frozenset(int(t) for t in line.split())
        if meta.get("vertex_faults"):
            n = meta["n"]
            bad = [v for v in failed if not 0 <= v < n]
            if bad:
                raise UsageError(f"vertex {bad[0]} out of range")
            failed = frozenset(meta["bridges"][v] for v in failed)
        path = query_tree(oracle, failed) if kind == "kpath-tree" else query_sampling(oracle, failed)
        if path is None:
            return "NO"
        verts = _project_witness(path, meta["n"], meta["k"]) if meta.get("vertex_faults") else path.vertices
        return "YES " + " ".join(map(str, verts))
    if kind in VC_KINDS:
        failed = frozenset(int(t) for t in line.split())
        q = {"vc-subset": query_subset_oracle, "vc-tree": query_vctree_oracle, "vc-kernel": query_kernel_oracle}[kind]
        return "YES" if q(oracle, failed) else "NO"
    if kind == "vc-dso":
        (u, v), failed = _split_query(line, 2)
        return _fmt_dist(query_vc_dso(oracle, u, v, failed))
    if kind == "preserver":
        failed = frozenset(int(t) for t in line.split())
        g = Graph.from_dict(meta["graph"])
        dropped = frozenset(range(g.m)) - oracle.kept
        levels, _ = bfs_levels(g.without(failed | dropped), oracle.s)
        return " ".join(_fmt_dist(d) for d in levels)
    if kind == "detour":
        (v,), failed = _split_query(line, 1)
        return "YES" if query_detour(oracle, v, failed) else "NO"
    if kind == "reach":
        (s, t), failed = _split_query(line, 2)
        return "YES" if query_reach(oracle, s, t, failed) else "NO"
    raise UsageError(f"unknown kind {kind!r}")


# -- verification -----------------------------------------------------------------


@dataclass
class VerifyReport:
    kind: str
    checked: int = 0
    mismatches: int = 0
    false_negatives: int = 0
    false_positives: int = 0
    roundtrip_mismatches: int = 0
    bound_violations: int = 0
    max_error_rate: float = 0.0
    examples: list = field(default_factory=list)

    def record(self, key, got, want):
        self.checked += 1
        if got != want:
            self.mismatches += 1
            if want is True:
                self.false_negatives += 1
            elif want is False:
                self.false_positives += 1
            if len(self.examples) < 5:
                self.examples.append((key, got, want))

    @property
    def error_rate(self) -> float:
        return self.mismatches / self.checked if self.checked else 0.0

    @property
    def ok(self) -> bool:
        if self.roundtrip_mismatches or self.bound_violations:
            return False
        if self.kind in KPATH_KINDS and self.false_positives:
            return False
        return self.error_rate <= self.max_error_rate

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (
            f"{status}\t{self.kind}\tchecked={self.checked}\tmismatches={self.mismatches}"
            f"\tfalse_neg={self.false_negatives}\tfalse_pos={self.false_positives}"
            f"\troundtrip={self.roundtrip_mismatches}\tbounds={self.bound_violations}"
        )


DEFAULT_BOUNDS = {
    "kpath-tree": dict(instances=20, n=(5, 10), m=(6, 14), f=2, k=4, directed=True),
    "kpath-sample": dict(instances=10, n=(5, 9), m=(6, 12), f=2, k=3, directed=True),
    "vc-subset": dict(instances=20, n=(4, 8), m=(3, 12), f=2, k=3, directed=False),
    "vc-tree": dict(instances=20, n=(4, 8), m=(3, 12), f=2, k=3, directed=False),
    "vc-kernel": dict(instances=20, n=(4, 8), m=(3, 12), f=2, k=3, directed=False),
    "vc-dso": dict(instances=20, n=(4, 10), m=(3, 14), f=2, k=0, directed=True),
    "preserver": dict(instances=15, n=(4, 8), m=(4, 12), f=2, k=2, directed=True),
    "detour": dict(instances=15, n=(4, 8), m=(4, 12), f=2, k=2, directed=True),
    "reach": dict(instances=20, n=(3, 10), m=(3, 16), f=3, k=0, directed=True),
}


def random_instances(count: int, n: tuple[int, int], m: tuple[int, int], directed: bool, seed: int) -> Iterator[Graph]:
    rng = random.Random(seed)
    for _ in range(count):
        nn = rng.randint(*n)
        mm = rng.randint(*m)
        yield gnm(nn, mm, directed, rng.randrange(2**31))


def verify_kind(kind: str, seed: int = 0, trials: int | None = None, **overrides) -> VerifyReport:
    """Sweep ``kind`` against the brute-force oracle on random instances.

    Every instance is also serialized and reloaded; the reloaded oracle
    must give identical answers.
    """
    if kind not in DEFAULT_BOUNDS:
        raise UsageError(f"unknown kind {kind!r}")
    b = dict(DEFAULT_BOUNDS[kind])
    b.update({k: v for k, v in overrides.items() if v is not None})
    if trials is not None:
        b["instances"] = trials
    rep = VerifyReport(kind)
    if kind == "kpath-sample":
        rep.max_error_rate = 0.01
    if kind == "reach":
        rep.max_error_rate = 0.001
    for idx, g in enumerate(random_instances(b["instances"], b["n"], b["m"], b["directed"], seed)):
        for f, k in _param_grid(kind, b):
            oracle, meta = build_oracle(kind, g, f, k, seed=seed + idx)
            again = loads(dumps(kind, oracle, meta))[1]
            for key, want, ask in _queries(kind, g, f, k):
                got = ask(oracle)
                if ask(again) != got:
                    rep.roundtrip_mismatches += 1
                if kind in KPATH_KINDS and got is not None:
                    failed = key[0]
                    if not got.is_valid(g.without(failed), k):
                        rep.false_positives += 1
                rep.record((idx, f, k, key), _truthy(got), want)
            rep.bound_violations += _bound_violations(kind, oracle, f, k)
    return rep


def _truthy(x):
    if isinstance(x, KPath):
        return True
    return False if x is None else x


def _param_grid(kind: str, b: dict) -> list[tuple[int, int]]:
    if kind in KPATH_KINDS:
        fs = range(0, b["f"] + 1) if kind == "kpath-tree" else range(1, b["f"] + 1)
        return [(f, k) for f in fs for k in range(1, b["k"] + 1)]
    if kind in VC_KINDS or kind in ("preserver", "detour"):
        return [(f, k) for f in range(b["f"] + 1) for k in range(b["k"] + 1)]
    if kind == "vc-dso":
        return [(f, 0) for f in range(1, b["f"] + 1)]
    return [(b["f"], 0)]


def _queries(kind: str, g: Graph, f: int, k: int):
    if kind == "kpath-tree":
        for F in failure_sets(g.m, f):
            yield (F,), gt.bf_kpath(g, F, k), lambda o, F=F: query_tree(o, F)
    elif kind == "kpath-sample":
        for F in failure_sets(g.m, f):
            yield (F,), gt.bf_kpath(g, F, k), lambda o, F=F: query_sampling(o, F)
    elif kind in VC_KINDS:
        q = {"vc-subset": query_subset_oracle, "vc-tree": query_vctree_oracle, "vc-kernel": query_kernel_oracle}[kind]
        for F in failure_sets(g.m, f):
            yield (F,), gt.bf_vc(g, F, k), lambda o, F=F, q=q: q(o, F)
    elif kind == "vc-dso":
        for F in failure_sets(g.m, f):
            for u in range(g.n):
                for v in range(g.n):
                    yield (F, u, v), gt.bf_dist(g, F, u, v), lambda o, F=F, u=u, v=v: query_vc_dso(o, u, v, F)
    elif kind == "preserver":
        base = [gt.bf_dist(g, (), 0, v) for v in range(g.n)]
        for F in failure_sets(g.m, f):
            for v in range(g.n):
                d = gt.bf_dist(g, F, 0, v)
                if d == INF or d > base[v] + k:
                    continue
                yield (F, v), d, lambda o, F=F, v=v: _preserved_distance(g, o, F, v)
    elif kind == "detour":
        for F in failure_sets(g.m, f):
            for v in range(g.n):
                yield (F, v), gt.bf_detour(g, 0, v, F, k), lambda o, F=F, v=v: query_detour(o, v, F)
    elif kind == "reach":
        rng = random.Random(g.m * 7919 + g.n)
        for _ in range(60):
            F = frozenset(rng.sample(range(g.m), min(f, g.m)))
            s, t = rng.randrange(g.n), rng.randrange(g.n)
            yield (F, s, t), gt.bf_reach(g, F, s, t), lambda o, F=F, s=s, t=t: query_reach(o, s, t, F)


def _preserved_distance(g: Graph, o, failed, v) -> float:
    dropped = frozenset(range(g.m)) - o.kept
    return bfs_distance(g.without(failed | dropped), o.s, v)


def _bound_violations(kind: str, o, f: int, k: int) -> int:
    if kind == "kpath-tree":
        return int(o.size > node_bound(f, k))
    if kind == "kpath-sample":
        return int(o.r != r_count(f, k, max(o.n, 2)))
    if kind == "vc-subset":
        return int(len(o.family) > 3 ** (f + k))
    if kind == "vc-tree":
        return int(o.size > 2 ** (f + k * (k + 1) + 1))
    if kind == "vc-kernel":
        ker = o.kernel
        return int(not ker.global_no and ker.H.m > ker.edge_bound())
    if kind == "detour":
        return int(len(o.aux) != 2**k)
    return 0


# -- benchmarking ---------------------------------------------------------------

BENCH_COLUMNS = ("kind", "n", "m", "f", "k", "build_s", "bytes", "units", "query_us", "size_bound")


def size_bound(kind: str, n: int, f: int, k: int) -> str:
    """The asymptotic size formula of each construction, evaluated without constants."""
    if kind == "kpath-tree":
        return str(node_bound(f, k) * k)
    if kind == "kpath-sample":
        return str(r_count(f, k, max(n, 2)) * k) if f else str(k)
    if kind == "vc-subset":
        return str(3 ** (f + k))
    if kind == "vc-tree":
        return str(2 ** (f + k * k + k))
    if kind == "vc-kernel":
        return str(f * k + k * k)
    if kind == "vc-dso":
        return "min(n*c+f*c^2,m)"
    if kind == "preserver":
        return str(preserver_bound(f, k, n))
    if kind == "detour":
        return str(2**k * (k * n) ** 2)
    if kind == "reach":
        return str(n * n)
    return ""


def _units(kind: str, o) -> int:
    if kind == "kpath-tree":
        return o.size
    if kind == "kpath-sample":
        return len(o.paths)
    if kind == "vc-subset":
        return len(o.family)
    if kind == "vc-tree":
        return o.size
    if kind == "vc-kernel":
        return o.kernel.H.m
    if kind == "vc-dso":
        return o.size
    if kind == "preserver":
        return len(o.kept)
    if kind == "detour":
        return sum(a.graph.m for a in o.aux)
    if kind == "reach":
        return o.n * o.n
    return 0


def bench_row(kind: str, n: int, m: int, f: int, k: int, seed: int = 0, queries: int = 50) -> dict:
    directed = kind not in VC_KINDS
    g = gnm(n, m, directed, seed)
    t0 = time.perf_counter()
    o, meta = build_oracle(kind, g, f, k, seed=seed)
    build_s = time.perf_counter() - t0
    size = len(dumps(kind, o, meta))
    rng = random.Random(seed)
    lines = []
    for _ in range(queries):
        F = " ".join(map(str, rng.sample(range(g.m), min(f, g.m)))) if g.m else ""
        if kind in ("vc-dso", "reach"):
            lines.append(f"{rng.randrange(n)} {rng.randrange(n)} : {F}")
        elif kind == "detour":
            lines.append(f"{rng.randrange(n)} : {F}")
        else:
            lines.append(F)
    t0 = time.perf_counter()
    for line in lines:
        answer(kind, o, meta, line)
    q_us = (time.perf_counter() - t0) / max(len(lines), 1) * 1e6
    return {
        "kind": kind,
        "n": n,
        "m": g.m,
        "f": f,
        "k": k,
        "build_s": f"{build_s:.4f}",
        "bytes": size,
        "units": _units(kind, o),
        "query_us": f"{q_us:.1f}",
        "size_bound": size_bound(kind, n, f, k),
    }
