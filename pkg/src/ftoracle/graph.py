"""Graph representation, failure sets and traversal helpers.

Edges carry dense integer ids ``0..m-1`` in input order.  Every oracle in
the package speaks in these ids: a failure set is a set of edge ids, and an
undirected edge has a single id so failing it removes both directions.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, GraphParseError

INF = math.inf


class Graph:
    """Simple graph (no loops, no parallel edges) with stable edge ids.

    Undirected edges are stored once, oriented ``(min, max)``; the arc
    accessors expose both directions.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], directed: bool = True):
        self.n = int(n)
        self.directed = bool(directed)
        self.edges: list[tuple[int, int]] = []
        self._index: dict[tuple[int, int], int] = {}
        self._out: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        self._in: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v in edges:
            self._add(int(u), int(v))

    def _add(self, u: int, v: int) -> int:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        key = (u, v) if self.directed else (min(u, v), max(u, v))
        if key in self._index:
            raise ValueError(f"duplicate edge {key}")
        eid = len(self.edges)
        self.edges.append(key)
        self._index[key] = eid
        a, b = key
        self._out[a].append((eid, b))
        self._in[b].append((eid, a))
        if not self.directed:
            self._out[b].append((eid, a))
            self._in[a].append((eid, b))
        return eid

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, m={self.m}, {kind})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.directed, self.edges) == (other.n, other.directed, other.edges)

    def edge_id(self, u: int, v: int) -> int | None:
        key = (u, v) if self.directed else (min(u, v), max(u, v))
        return self._index.get(key)

    def out_arcs(self, v: int) -> list[tuple[int, int]]:
        """``(edge id, head)`` pairs leaving ``v``, sorted by edge id."""
        return self._out[v]

    def in_arcs(self, v: int) -> list[tuple[int, int]]:
        """``(edge id, tail)`` pairs entering ``v``, sorted by edge id."""
        return self._in[v]

    def arcs(self) -> Iterator[tuple[int, int, int]]:
        """All ``(tail, head, edge id)`` arcs; undirected edges yield two."""
        for eid, (u, v) in enumerate(self.edges):
            yield u, v, eid
            if not self.directed:
                yield v, u, eid

    def edge_ids(self) -> Iterator[int]:
        return iter(range(self.m))

    def without(self, failed: Iterable[int]) -> "GraphView":
        return subgraph_minus(self, failed)

    def degree(self, v: int) -> int:
        if self.directed:
            return len(self._out[v]) + len(self._in[v])
        return len(self._out[v])

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m} {'d' if self.directed else 'u'}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"n": self.n, "directed": self.directed, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, d: dict) -> "Graph":
        return cls(d["n"], [tuple(e) for e in d["edges"]], d["directed"])


class GraphView:
    """Non-materializing view of ``g`` with some edges removed.

    Exposes the same read interface as :class:`Graph`; edge ids are those
    of the underlying graph.
    """

    def __init__(self, g: Graph, removed: frozenset[int]):
        self.base = g
        self.removed = removed
        self.n = g.n
        self.directed = g.directed
        self.edges = g.edges

    @property
    def m(self) -> int:
        return self.base.m - len(self.removed)

    def __repr__(self) -> str:
        return f"GraphView({self.base!r}, removed={sorted(self.removed)})"

    def edge_id(self, u: int, v: int) -> int | None:
        eid = self.base.edge_id(u, v)
        return None if eid is None or eid in self.removed else eid

    def out_arcs(self, v: int) -> list[tuple[int, int]]:
        return [a for a in self.base.out_arcs(v) if a[0] not in self.removed]

    def in_arcs(self, v: int) -> list[tuple[int, int]]:
        return [a for a in self.base.in_arcs(v) if a[0] not in self.removed]

    def arcs(self) -> Iterator[tuple[int, int, int]]:
        return (a for a in self.base.arcs() if a[2] not in self.removed)

    def edge_ids(self) -> Iterator[int]:
        return (e for e in range(self.base.m) if e not in self.removed)

    def without(self, failed: Iterable[int]) -> "GraphView":
        return GraphView(self.base, self.removed | frozenset(failed))

    def degree(self, v: int) -> int:
        if self.directed:
            return len(self.out_arcs(v)) + len(self.in_arcs(v))
        return len(self.out_arcs(v))

    def materialize(self) -> tuple[Graph, list[int]]:
        """Copy into a fresh :class:`Graph`; returns it with new-id -> old-id."""
        keep = [e for e in range(self.base.m) if e not in self.removed]
        return Graph(self.n, [self.base.edges[e] for e in keep], self.directed), keep


def subgraph_minus(g: Graph | GraphView, failed: Iterable[int]) -> GraphView:
    """View of ``g`` without the edges in ``failed``."""
    if isinstance(g, GraphView):
        return g.without(failed)
    return GraphView(g, frozenset(failed))


@dataclass(frozen=True)
class FailureSet:
    """At most ``capacity`` failed edge ids, with O(1) membership."""

    edges: frozenset[int]
    capacity: int | None = None

    def __init__(self, edges: Iterable[int] = (), capacity: int | None = None, m: int | None = None):
        es = frozenset(int(e) for e in edges)
        if capacity is not None and len(es) > capacity:
            raise CapacityError(f"{len(es)} failures exceed capacity f={capacity}")
        if m is not None:
            bad = [e for e in es if not 0 <= e < m]
            if bad:
                raise ValueError(f"edge id {min(bad)} out of range for m={m}")
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "capacity", capacity)

    def __contains__(self, e: object) -> bool:
        return e in self.edges

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.edges))

    def __len__(self) -> int:
        return len(self.edges)


def check_failures(failed: Iterable[int], f: int | None) -> frozenset[int]:
    """Normalize a failure collection and enforce the capacity ``f``."""
    if isinstance(failed, FailureSet):
        es = failed.edges
    else:
        es = frozenset(int(e) for e in failed)
    if f is not None and len(es) > f:
        raise CapacityError(f"{len(es)} failures exceed capacity f={f}")
    return es


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: header ``n m d|u`` then ``m`` lines ``tail head``."""
    lines = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, toks) for i, toks in lines if toks and not toks[0].startswith("#")]
    if not lines:
        raise GraphParseError("empty graph document", 1)
    hline, header = lines[0]
    if len(header) != 3 or header[2] not in ("d", "u"):
        raise GraphParseError("malformed header, expected 'n m d|u'", hline)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphParseError("malformed header, expected 'n m d|u'", hline) from None
    if n < 0 or m < 0:
        raise GraphParseError("negative size in header", hline)
    body = lines[1:]
    if len(body) != m:
        raise GraphParseError(f"expected {m} edge lines, found {len(body)}", hline)
    g = Graph(n, [], directed=header[2] == "d")
    for lineno, toks in body:
        if len(toks) != 2:
            raise GraphParseError("expected 'tail head'", lineno)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphParseError("non-integer vertex", lineno) from None
        for x in (u, v):
            if not 0 <= x < n:
                raise GraphParseError(f"vertex {x} out of range", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        if g.edge_id(u, v) is not None:
            raise GraphParseError(f"duplicate edge ({u}, {v})", lineno)
        g._add(u, v)
    return g


def parse_failures(text: str) -> list[frozenset[int]]:
    """One failure set per line, whitespace-separated edge ids."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        try:
            out.append(frozenset(int(t) for t in line.split()))
        except ValueError:
            raise GraphParseError("non-integer edge id", lineno) from None
    return out


@dataclass
class VertexSplitMap:
    """Bookkeeping for :func:`split_vertices`.

    ``forward[v] = (v_in, v_out, bridge edge id)``; ``origin[e]`` is the
    original edge id of a non-bridge edge ``e`` of the split graph.
    """

    forward: list[tuple[int, int, int]]
    inverse: dict[int, int]
    origin: dict[int, int] = field(default_factory=dict)

    def bridges(self, vertices: Iterable[int]) -> frozenset[int]:
        return frozenset(self.forward[v][2] for v in vertices)


def split_vertices(g: Graph) -> tuple[Graph, VertexSplitMap]:
    """Replace each vertex v by ``v_in -> v_out`` so vertex faults become edge faults.

    ``v_in = v`` and ``v_out = n + v``.  Original arcs come first, in arc
    order (undirected edges contribute both orientations), then the ``n``
    bridges in vertex order.
    """
    n = g.n
    arcs = [(u, v, e) for u, v, e in g.arcs()]
    edges = [(u + n, v) for u, v, _ in arcs]
    origin = {i: e for i, (_, _, e) in enumerate(arcs)}
    first_bridge = len(edges)
    edges += [(v, v + n) for v in range(n)]
    split = Graph(2 * n, edges, directed=True)
    forward = [(v, v + n, first_bridge + v) for v in range(n)]
    inverse = {first_bridge + v: v for v in range(n)}
    return split, VertexSplitMap(forward, inverse, origin)


def bfs_levels(g: Graph | GraphView, s: int) -> tuple[list[float], list[int]]:
    """BFS distances from ``s`` and a shortest-path tree.

    Returns ``(level, parent)`` where ``level[v]`` is ``INF`` for
    unreachable vertices and ``parent[v]`` is the smallest edge id among
    arcs ``(u, v)`` with ``level[u] = level[v] - 1`` (``-1`` for ``s`` and
    unreachable vertices).
    """
    level: list[float] = [INF] * g.n
    level[s] = 0
    dq = deque([s])
    while dq:
        u = dq.popleft()
        for _, w in g.out_arcs(u):
            if level[w] == INF:
                level[w] = level[u] + 1
                dq.append(w)
    parent = [-1] * g.n
    for v in range(g.n):
        if v == s or level[v] == INF:
            continue
        parent[v] = min(e for e, u in g.in_arcs(v) if level[u] == level[v] - 1)
    return level, parent


def bfs_distance(g: Graph | GraphView, s: int, t: int) -> float:
    if s == t:
        return 0
    seen = {s}
    frontier = [s]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for _, w in g.out_arcs(u):
                if w == t:
                    return d
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return INF


def reachable_from(g: Graph | GraphView, s: int) -> set[int]:
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for _, w in g.out_arcs(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def failure_sets(m: int, f: int, edges: Sequence[int] | None = None) -> Iterator[frozenset[int]]:
    """Every subset of ``edges`` (default ``range(m)``) with at most ``f`` members."""
    from itertools import combinations

    pool = list(range(m)) if edges is None else list(edges)
    for size in range(min(f, len(pool)) + 1):
        for combo in combinations(pool, size):
            yield frozenset(combo)


def split_with_hub(g: Graph) -> tuple[Graph, VertexSplitMap]:
    """:func:`split_vertices` plus a hub vertex with an arc into every in-copy.

    A 2k-vertex path of the plain split graph may start at an out-copy and
    end at an in-copy, skipping both endpoint bridges, so it can survive
    the failure of its own endpoints.  In the hub graph every path on
    ``2k + 1`` vertices crosses ``k`` consecutive intact bridges, hence
    ``G - S`` has a k-path iff the hub graph minus the bridges of ``S``
    has a ``(2k + 1)``-path.
    """
    split, smap = split_vertices(g)
    hub = split.n
    edges = list(split.edges) + [(hub, v) for v in range(g.n)]
    return Graph(hub + 1, edges, directed=True), smap
