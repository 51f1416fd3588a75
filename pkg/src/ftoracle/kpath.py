"""k-Path detection: exhaustive DFS for small inputs, color coding otherwise.

A k-path is a simple path on exactly ``k`` vertices (``k - 1`` edges).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CapExceeded
from .graph import Graph, GraphView

GraphLike = Graph | GraphView
KPathSolver = Callable[[GraphLike, int], "KPath | None"]

EXHAUSTIVE_MAX_K = 8
EXHAUSTIVE_MAX_N = 14


@dataclass(frozen=True)
class KPath:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    @property
    def k(self) -> int:
        return len(self.vertices)

    def is_valid(self, g: GraphLike, k: int | None = None) -> bool:
        """True iff this is a simple path of ``g`` (on ``k`` vertices, if given)."""
        if k is not None and len(self.vertices) != k:
            return False
        if len(set(self.vertices)) != len(self.vertices):
            return False
        if len(self.edges) != len(self.vertices) - 1:
            return False
        for (u, v), e in zip(zip(self.vertices, self.vertices[1:]), self.edges):
            if g.edge_id(u, v) != e:
                return False
        return True

    def to_list(self) -> list:
        return [list(self.vertices), list(self.edges)]

    @classmethod
    def from_list(cls, d) -> "KPath":
        return cls(tuple(d[0]), tuple(d[1]))


@dataclass(frozen=True)
class SolverConfig:
    """``mode`` is ``auto``, ``exhaustive`` or ``randomized``.

    ``auto`` runs the exact DFS when ``k <= 8`` or ``n <= 14`` and color
    coding otherwise.  ``c`` scales the color-coding repetition count.
    """

    mode: str = "auto"
    seed: int | None = 0
    c: float = 3.0
    cap: int = 16

    def __post_init__(self):
        if self.mode not in ("auto", "exhaustive", "randomized"):
            raise ValueError(f"unknown solver mode {self.mode!r}")

    @property
    def exact(self) -> bool:
        return self.mode == "exhaustive"


def find_k_path(g: GraphLike, k: int, config: SolverConfig | None = None) -> KPath | None:
    """Return a k-path of ``g`` or ``None``.

    Exact in exhaustive mode (and in auto mode on small inputs).  Color
    coding can miss an existing path with probability below ``n**-c``; it
    never reports a path that does not exist.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    config = config or SolverConfig()
    if config.mode == "exhaustive" or (
        config.mode == "auto" and (k <= EXHAUSTIVE_MAX_K or g.n <= EXHAUSTIVE_MAX_N)
    ):
        return _dfs_k_path(g, k)
    return color_coding_k_path(g, k, np.random.default_rng(config.seed), config.c)


def brute_force_k_path(g: GraphLike, k: int, cap: int = 16) -> KPath | None:
    """Exhaustive DFS over simple paths; refuses graphs above ``cap`` vertices."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if g.n > cap:
        raise CapExceeded(f"brute force k-path refuses n={g.n} > cap={cap}")
    return _dfs_k_path(g, k)


def _dfs_k_path(g: GraphLike, k: int) -> KPath | None:
    # Start vertices ascending, arcs in edge-id order: the first path found
    # is deterministic for a fixed input ordering.
    if k > g.n:
        return None
    if k == 1:
        return KPath((0,), ()) if g.n else None
    adj = [g.out_arcs(v) for v in range(g.n)]
    on_path = [False] * g.n
    verts: list[int] = []
    eids: list[int] = []

    def extend(u: int) -> bool:
        if len(verts) == k:
            return True
        for e, w in adj[u]:
            if not on_path[w]:
                on_path[w] = True
                verts.append(w)
                eids.append(e)
                if extend(w):
                    return True
                on_path[w] = False
                verts.pop()
                eids.pop()
        return False

    for s in range(g.n):
        if not adj[s]:
            continue
        on_path[s] = True
        verts.append(s)
        if extend(s):
            return KPath(tuple(verts), tuple(eids))
        on_path[s] = False
        verts.pop()
    return None


def color_coding_repetitions(k: int, n: int, c: float = 3.0) -> int:
    return max(1, math.ceil(math.exp(k) * c * math.log(max(n, 2))))


def color_coding_k_path(
    g: GraphLike, k: int, rng: np.random.Generator, c: float = 3.0, chunk: int = 256
) -> KPath | None:
    """Randomized k-path detection by color coding.

    All repetitions of a chunk are advanced together: ``dp[r, v, S]`` says
    that under coloring ``r`` some colorful path ending at ``v`` uses
    exactly the color set ``S``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    if k > n:
        return None
    if k == 1:
        return KPath((0,), ()) if n else None
    arcs = list(g.arcs())
    if not arcs:
        return None
    reps = color_coding_repetitions(k, n, c)
    full = (1 << k) - 1
    # target[j, S] = S | {j} when j is not in S, else the trash column 2**k
    target = np.full((k, 1 << k), 1 << k, dtype=np.int64)
    for j in range(k):
        for s in range(1 << k):
            if not s >> j & 1:
                target[j, s] = s | (1 << j)
    preds = [np.array(sorted({u for u, w, _ in arcs if w == v}), dtype=np.int64) for v in range(n)]
    done = 0
    while done < reps:
        r = min(chunk, reps - done)
        done += r
        rows = np.arange(r)[:, None]
        colors = rng.integers(0, k, size=(r, n))
        layers = []
        dp = np.zeros((r, n, (1 << k) + 1), dtype=bool)
        dp[rows, np.arange(n)[None, :], 1 << colors] = True
        layers.append(dp)
        for _ in range(k - 1):
            new = np.zeros_like(dp)
            for v in range(n):
                if preds[v].size:
                    cand = dp[:, preds[v], : 1 << k].any(axis=1)
                    new[rows, v, target[colors[:, v]]] = cand
            new[:, :, 1 << k] = False
            dp = new
            layers.append(dp)
        hits = np.nonzero(dp[:, :, full].any(axis=1))[0]
        if hits.size:
            ri = int(hits[0])
            return _recover(g, arcs, layers, colors[ri], ri, k)
    return None


def _recover(g, arcs, layers, coloring, ri, k) -> KPath:
    in_arcs: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for u, v, e in arcs:
        in_arcs[v].append((u, e))
    full = (1 << k) - 1
    v = int(np.nonzero(layers[-1][ri, :, full])[0][0])
    mask = full
    verts, eids = [v], []
    for depth in range(k - 1, 0, -1):
        prev_mask = mask & ~(1 << int(coloring[v]))
        for u, e in in_arcs[v]:
            if layers[depth - 1][ri, u, prev_mask]:
                verts.append(u)
                eids.append(e)
                v, mask = u, prev_mask
                break
        else:  # pragma: no cover - dp guarantees a predecessor
            raise AssertionError("color-coding backtrack failed")
    return KPath(tuple(reversed(verts)), tuple(reversed(eids)))

