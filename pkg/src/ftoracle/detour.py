"""Bounded-stretch fault-tolerant BFS structures.

With ``Level`` the BFS depth from the source, every arc ``(a, b)`` has
slack ``1 + Level(a) - Level(b) >= 0``.  A path's slack sequence sums to
its length minus the target level, so paths stretched by at most ``k`` are
exactly those whose positive slacks form a composition ``Y`` of at most
``k``.  For each ``Y`` a layered graph admits precisely the walks with
that signature; reachability there (under projected failures) decides the
stretch question and its reachability trees yield a distance preserver.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapExceeded
from .fieldreach import FieldMatrixOracle, build_field_oracle, query_reach
from .graph import INF, Graph, bfs_levels, check_failures

LevelSequence = tuple[int, ...]


def enumerate_Y(k: int) -> list[LevelSequence]:
    """The empty sequence plus every composition of 1..k; ``2**k`` items."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out: list[LevelSequence] = [()]
    for total in range(1, k + 1):
        out.extend(sorted(_compositions(total)))
    return out


def _compositions(total: int) -> list[LevelSequence]:
    if total == 0:
        return [()]
    return [(first,) + rest for first in range(1, total + 1) for rest in _compositions(total - first)]


def x_sequence(path_vertices: Sequence[int], levels: Sequence[float]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Slack sequence ``X`` of a vertex path and its positive part ``X+``."""
    xs = tuple(int(1 + levels[a] - levels[b]) for a, b in zip(path_vertices, path_vertices[1:]))
    return xs, tuple(x for x in xs if x > 0)


@dataclass
class AuxGraph:
    """Layered graph for one signature ``Y``.

    Vertex ``v`` of layer ``i`` is ``i * n + v``.  ``phi[j]`` is the input
    edge id behind aux edge ``j``; ``phi_inv`` is the reverse map.
    """

    Y: LevelSequence
    n: int
    graph: Graph
    phi: list[int]
    phi_inv: dict[int, list[int]]
    source: int

    @property
    def t(self) -> int:
        return len(self.Y)

    def target(self, v: int) -> int:
        return self.t * self.n + v

    def lift(self, failed: Iterable[int]) -> frozenset[int]:
        return frozenset(a for e in failed for a in self.phi_inv.get(e, ()))


def build_aux_graph(g: Graph, s: int, Y: Sequence[int], levels: Sequence[float] | None = None) -> AuxGraph:
    Y = tuple(Y)
    if any(y < 1 for y in Y):
        raise ValueError("signature entries must be positive")
    if levels is None:
        levels, _ = bfs_levels(g, s)
    n, t = g.n, len(Y)
    edges: list[tuple[int, int]] = []
    phi: list[int] = []
    for a, b, e in g.arcs():
        la, lb = levels[a], levels[b]
        if la == INF or lb == INF:
            continue
        if lb - la == 1:
            for i in range(t + 1):
                edges.append((i * n + a, i * n + b))
                phi.append(e)
        slack = 1 + la - lb
        for i in range(1, t + 1):
            if slack == Y[i - 1]:
                edges.append(((i - 1) * n + a, i * n + b))
                phi.append(e)
    order = sorted(range(len(edges)), key=lambda j: (phi[j], edges[j]))
    edges = [edges[j] for j in order]
    phi = [phi[j] for j in order]
    phi_inv: dict[int, list[int]] = {}
    for j, e in enumerate(phi):
        phi_inv.setdefault(e, []).append(j)
    return AuxGraph(Y, n, Graph((t + 1) * n, edges, directed=True), phi, phi_inv, s)


def _reach_tree(aux: AuxGraph, removed: frozenset[int]) -> list[int]:
    """Aux edge ids of a BFS tree from the source avoiding ``removed``."""
    seen = {aux.source}
    dq = deque([aux.source])
    tree = []
    g = aux.graph
    while dq:
        u = dq.popleft()
        for e, w in g.out_arcs(u):
            if e in removed or w in seen:
                continue
            seen.add(w)
            tree.append(e)
            dq.append(w)
    return tree


# -- preserver ----------------------------------------------------------------

PRESERVER_MAX_FAILURE_SETS = 200_000


@dataclass
class Preserver:
    kept: frozenset[int]
    f: int
    k: int
    s: int
    n: int
    per_y: dict[LevelSequence, int] = field(default_factory=dict)

    def bound(self) -> int:
        return preserver_bound(self.f, self.k, self.n)

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "k": self.k,
            "s": self.s,
            "n": self.n,
            "kept": sorted(self.kept),
            "per_y": [[list(y), c] for y, c in self.per_y.items()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Preserver":
        return cls(frozenset(d["kept"]), d["f"], d["k"], d["s"], d["n"], {tuple(y): c for y, c in d["per_y"]})


def preserver_bound(f: int, k: int, n: int) -> int:
    return 2 ** (f * k + f + k) * k * n


def _count_failure_sets(m: int, f: int) -> int:
    return sum(math.comb(m, i) for i in range(min(f, m) + 1))


def build_preserver(g: Graph, s: int, f: int, k: int, max_failure_sets: int = PRESERVER_MAX_FAILURE_SETS) -> Preserver:
    """Union over every ``Y`` and every ``|F| <= f`` of projected reachability trees.

    Exhaustive in the failure sets, so it refuses inputs where
    ``sum_{i<=f} C(m, i)`` exceeds ``max_failure_sets``.
    """
    if f < 0 or k < 0:
        raise ValueError("need f, k >= 0")
    count = _count_failure_sets(g.m, f)
    if count > max_failure_sets:
        raise CapExceeded(f"{count} failure sets exceed the preserver cap {max_failure_sets}")
    levels, _ = bfs_levels(g, s)
    kept: set[int] = set()
    per_y: dict[LevelSequence, int] = {}
    for Y in enumerate_Y(k):
        aux = build_aux_graph(g, s, Y, levels)
        h_y: set[int] = set()
        relevant = sorted(aux.phi_inv)
        for size in range(min(f, len(relevant)) + 1):
            for failed in combinations(relevant, size):
                for a in _reach_tree(aux, aux.lift(failed)):
                    h_y.add(aux.phi[a])
        per_y[Y] = len(h_y)
        kept |= h_y
    return Preserver(frozenset(kept), f, k, s, g.n, per_y)


@dataclass
class PreserverReport:
    violations: list[tuple[int, tuple[int, ...], float, float]]
    checked: int
    kept_edges: int
    bound: int

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_preserver(g: Graph, s: int, f: int, k: int, kept: Iterable[int]) -> PreserverReport:
    """Check ``d(s,v,H-F) = d(s,v,G-F)`` whenever the stretch is at most ``k``."""
    kept = frozenset(kept)
    dropped = frozenset(range(g.m)) - kept
    base, _ = bfs_levels(g, s)
    violations = []
    checked = 0
    for size in range(min(f, g.m) + 1):
        for failed in combinations(range(g.m), size):
            fs = frozenset(failed)
            dg, _ = bfs_levels(g.without(fs), s)
            dh, _ = bfs_levels(g.without(fs | dropped), s)
            for v in range(g.n):
                if dg[v] == INF or dg[v] > base[v] + k:
                    continue
                checked += 1
                if dh[v] != dg[v]:
                    violations.append((v, failed, dh[v], dg[v]))
    return PreserverReport(violations, checked, len(kept), preserver_bound(f, k, g.n))


# -- detour decision oracle -----------------------------------------------------

BACKENDS = ("bfs", "algebraic")


@dataclass
class DetourOracle:
    """One layered graph (and backend instance) per signature ``Y``."""

    graph: Graph
    s: int
    k: int
    f: int | None
    backend: str
    levels: list[float]
    aux: list[AuxGraph]
    field: list[FieldMatrixOracle | None]
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "s": self.s,
            "k": self.k,
            "f": self.f,
            "backend": self.backend,
            "seed": self.seed,
            "field": [None if fo is None else fo.to_dict() for fo in self.field],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DetourOracle":
        g = Graph.from_dict(d["graph"])
        levels, _ = bfs_levels(g, d["s"])
        aux = [build_aux_graph(g, d["s"], Y, levels) for Y in enumerate_Y(d["k"])]
        fields = [None if fo is None else FieldMatrixOracle.from_dict(fo) for fo in d["field"]]
        return cls(g, d["s"], d["k"], d["f"], d["backend"], levels, aux, fields, d["seed"])


def build_detour_oracle(
    g: Graph, s: int, k: int, backend: str = "bfs", f: int | None = None, seed: int | None = 0
) -> DetourOracle:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")
    levels, _ = bfs_levels(g, s)
    aux = [build_aux_graph(g, s, Y, levels) for Y in enumerate_Y(k)]
    if backend == "algebraic":
        fields = [build_field_oracle(a.graph, None if seed is None else seed * 1_000_003 + i) for i, a in enumerate(aux)]
    else:
        fields = [None] * len(aux)
    return DetourOracle(g, s, k, f, backend, levels, aux, fields, seed)


def query_detour(o: DetourOracle, v: int, failed: Iterable[int]) -> bool:
    """Is ``d(s, v, G - F) <= d(s, v, G) + k``?  (False when ``v`` is cut off.)"""
    fs = check_failures(failed, o.f)
    for aux, fo in zip(o.aux, o.field):
        lifted = aux.lift(fs)
        src, dst = aux.source, aux.target(v)
        if fo is not None:
            if query_reach(fo, src, dst, lifted):
                return True
        elif _bfs_reaches(aux.graph, src, dst, lifted):
            return True
    return False


def _bfs_reaches(g: Graph, s: int, t: int, removed: frozenset[int]) -> bool:
    if s == t:
        return True
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for e, w in g.out_arcs(u):
            if e in removed or w in seen:
                continue
            if w == t:
                return True
            seen.add(w)
            stack.append(w)
    return False
