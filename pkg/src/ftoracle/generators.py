"""Graph families used by the CLI and the test sweeps."""

from __future__ import annotations

import random
from itertools import combinations

from .graph import Graph


def gnm(n: int, m: int, directed: bool = True, seed: int | None = None) -> Graph:
    """Uniform graph with ``n`` vertices and ``min(m, max possible)`` edges."""
    rng = random.Random(seed)
    if directed:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        pairs = list(combinations(range(n), 2))
    return Graph(n, rng.sample(pairs, min(m, len(pairs))), directed)


def layered_dag(layers: int, width: int, p: float = 0.5, seed: int | None = None, skip: float = 0.1) -> Graph:
    """Layered DAG; forward edges between consecutive layers w.p. ``p``, longer jumps w.p. ``skip``."""
    rng = random.Random(seed)
    n = layers * width
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            gap = v // width - u // width
            if gap == 1 and rng.random() < p or gap > 1 and rng.random() < skip:
                edges.append((u, v))
    return Graph(n, edges, True)


def star_forest(stars: int, leaves: int) -> Graph:
    """``stars`` disjoint undirected stars with ``leaves`` leaves each; centers first per star."""
    edges = []
    for i in range(stars):
        center = i * (leaves + 1)
        edges += [(center, center + j) for j in range(1, leaves + 1)]
    return Graph(stars * (leaves + 1), edges, False)


def c4_pendant() -> Graph:
    """Undirected 4-cycle 0-1-2-3 with a pendant leaf on vertices 0, 1 and 2."""
    return Graph(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 5), (2, 6)], False)


FAMILIES = ("gnm", "layered-dag", "star-forest", "c4-pendant")
