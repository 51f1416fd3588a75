"""Distance sensitivity oracle parameterized by a given vertex cover.

The oracle keeps a small graph ``H`` on the cover plus common neighbours
of cover pairs (a single virtual vertex replaces any common neighbourhood
larger than ``f``), together with each non-cover vertex's edges into the
cover.  Queries never touch the input graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import NotACoverError
from .graph import Graph, check_failures

INF = math.inf


@dataclass
class VcDso:
    """``h_edges[j] = (a, b, orig)``: H-edge between H-vertices, ``orig = -1`` if virtual.

    ``h_vertices[i]`` is the original vertex of H-vertex ``i`` or ``-1``
    for a virtual one.  ``cover_out[v]`` / ``cover_in[v]`` list
    ``(cover vertex, edge id)`` for each ``v`` outside the cover.
    """

    n: int
    directed: bool
    cover: list[int]
    f: int
    h_vertices: list[int]
    h_edges: list[tuple[int, int, int]]
    cover_out: dict[int, list[tuple[int, int]]]
    cover_in: dict[int, list[tuple[int, int]]]

    def __post_init__(self):
        self._cover_set = set(self.cover)
        self._h_index = {v: i for i, v in enumerate(self.h_vertices) if v >= 0}
        self._h_adj: list[list[tuple[int, int]]] = [[] for _ in self.h_vertices]
        for a, b, orig in self.h_edges:
            self._h_adj[a].append((b, orig))
            if not self.directed:
                self._h_adj[b].append((a, orig))

    @property
    def size(self) -> int:
        """Stored entries: H vertices + H edges + cover-adjacency entries."""
        adj = sum(len(x) for x in self.cover_out.values())
        if self.directed:
            adj += sum(len(x) for x in self.cover_in.values())
        return len(self.h_vertices) + len(self.h_edges) + adj

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "directed": self.directed,
            "cover": self.cover,
            "f": self.f,
            "h_vertices": self.h_vertices,
            "h_edges": [list(e) for e in self.h_edges],
            "cover_out": [[v, [list(p) for p in lst]] for v, lst in sorted(self.cover_out.items())],
            "cover_in": [[v, [list(p) for p in lst]] for v, lst in sorted(self.cover_in.items())],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VcDso":
        return cls(
            d["n"],
            d["directed"],
            d["cover"],
            d["f"],
            d["h_vertices"],
            [tuple(e) for e in d["h_edges"]],
            {v: [tuple(p) for p in lst] for v, lst in d["cover_out"]},
            {v: [tuple(p) for p in lst] for v, lst in d["cover_in"]},
        )


def build_vc_dso(g: Graph, cover: Iterable[int], f: int) -> VcDso:
    cover = sorted(set(cover))
    cset = set(cover)
    for e, (u, v) in enumerate(g.edges):
        if u not in cset and v not in cset:
            raise NotACoverError(f"edge {e} = ({u}, {v}) is not covered")
    h_vertices = list(cover)
    h_index = {v: i for i, v in enumerate(cover)}
    h_edges: list[tuple[int, int, int]] = []
    seen_real: set[int] = set()

    def h_vertex(v: int) -> int:
        if v not in h_index:
            h_index[v] = len(h_vertices)
            h_vertices.append(v)
        return h_index[v]

    def add_real(a: int, b: int, e: int) -> None:
        if e not in seen_real:
            seen_real.add(e)
            h_edges.append((h_vertex(a), h_vertex(b), e))

    out_nb = [dict((w, e) for e, w in g.out_arcs(v)) for v in range(g.n)]
    in_nb = [dict((w, e) for e, w in g.in_arcs(v)) for v in range(g.n)]
    for x in cover:
        for y in cover:
            if x == y or (not g.directed and y < x):
                continue
            if y in out_nb[x]:
                add_real(x, y, out_nb[x][y])
            common = sorted(z for z in out_nb[x] if z in in_nb[y] and z not in cset)
            if not common:
                continue
            if len(common) <= f:
                for z in common:
                    add_real(x, z, out_nb[x][z])
                    add_real(z, y, in_nb[y][z])
            else:
                zv = len(h_vertices)
                h_vertices.append(-1)
                h_edges.append((h_index[x], zv, -1))
                h_edges.append((zv, h_index[y], -1))
    cover_out: dict[int, list[tuple[int, int]]] = {}
    cover_in: dict[int, list[tuple[int, int]]] = {}
    for v in range(g.n):
        if v in cset:
            continue
        cover_out[v] = [(w, e) for e, w in g.out_arcs(v)]
        if g.directed:
            cover_in[v] = [(w, e) for e, w in g.in_arcs(v)]
        else:
            cover_in[v] = list(cover_out[v])
        assert all(w in cset for w, _ in cover_out[v] + cover_in[v])
    return VcDso(g.n, g.directed, cover, f, h_vertices, h_edges, cover_out, cover_in)


def _h_distances(o: VcDso, fs: frozenset[int], sources: Iterable[int]) -> dict[int, list[float]]:
    # virtual edges carry orig = -1 and never fail
    out: dict[int, list[float]] = {}
    for src in sources:
        dist = [INF] * len(o.h_vertices)
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for a in frontier:
                for b, orig in o._h_adj[a]:
                    if orig in fs or dist[b] != INF:
                        continue
                    dist[b] = dist[a] + 1
                    nxt.append(b)
            frontier = nxt
        out[src] = dist
    return out


def query_vc_dso(o: VcDso, u: int, v: int, failed: Iterable[int]) -> float:
    fs = check_failures(failed, o.f)
    if u == v:
        return 0
    c = o._cover_set
    idx = o._h_index
    if u in c:
        starts = [(idx[u], 0)]
    else:
        starts = [(idx[x], 1) for x, e in o.cover_out[u] if e not in fs]
    if v in c:
        ends = [(idx[v], 0)]
    else:
        ends = [(idx[y], 1) for y, e in o.cover_in[v] if e not in fs]
    if not starts or not ends:
        return INF
    dist = _h_distances(o, fs, {a for a, _ in starts})
    best = INF
    for a, da in starts:
        row = dist[a]
        for b, db in ends:
            best = min(best, da + row[b] + db)
    return best
