"""Exhaustive reference oracles.

These are written without reusing the oracle code paths: plain sets,
recursion and itertools.  They refuse inputs beyond small caps instead of
silently running for hours.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from .errors import CapExceeded

MAX_N = 12
MAX_M = 16
MAX_F = 3


def _check_caps(g, failed=(), n_cap=MAX_N, m_cap=MAX_M, f_cap=MAX_F):
    if g.n > n_cap:
        raise CapExceeded(f"ground truth refuses n={g.n} > {n_cap}")
    if g.m > m_cap:
        raise CapExceeded(f"ground truth refuses m={g.m} > {m_cap}")
    if len(failed) > f_cap:
        raise CapExceeded(f"ground truth refuses |F|={len(failed)} > {f_cap}")


def _surviving_adjacency(g, failed) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for eid, (u, v) in enumerate(g.edges):
        if eid in failed:
            continue
        adj[u].add(v)
        if not g.directed:
            adj[v].add(u)
    return adj


def bf_kpath(g, failed: Iterable[int], k: int) -> bool:
    """Does ``g - failed`` contain a simple path on exactly ``k`` vertices?"""
    failed = frozenset(failed)
    _check_caps(g, failed)
    if k <= 0:
        return True
    if k > g.n:
        return False
    adj = _surviving_adjacency(g, failed)

    def grow(v: int, used: frozenset[int]) -> bool:
        if len(used) == k:
            return True
        return any(grow(w, used | {w}) for w in adj[v] if w not in used)

    return any(grow(v, frozenset([v])) for v in range(g.n))


def bf_vc(g, failed: Iterable[int], k: int) -> bool:
    """Does ``g - failed`` have a vertex cover of at most ``k`` vertices?"""
    failed = frozenset(failed)
    _check_caps(g, failed)
    if k < 0:
        return False
    live = [e for i, e in enumerate(g.edges) if i not in failed]
    if not live:
        return True
    touched = sorted({x for e in live for x in e})
    for size in range(min(k, len(touched)) + 1):
        for cover in combinations(touched, size):
            cs = set(cover)
            if all(u in cs or v in cs for u, v in live):
                return True
    return False


def bf_dist(g, failed: Iterable[int], s: int, t: int) -> float:
    """Shortest-path hop distance from ``s`` to ``t`` in ``g - failed``."""
    failed = frozenset(failed)
    _check_caps(g, failed)
    adj = _surviving_adjacency(g, failed)
    dist = {s: 0}
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist.get(t, math.inf)


def bf_detour(g, s: int, v: int, failed: Iterable[int], k: int) -> bool:
    """``d(s, v, G - F) <= d(s, v, G) + k`` with ``v`` reachable in ``G - F``."""
    d_f = bf_dist(g, failed, s, v)
    return d_f != math.inf and d_f <= bf_dist(g, (), s, v) + k


def bf_reach(g, failed: Iterable[int], s: int, t: int) -> bool:
    return bf_dist(g, failed, s, t) != math.inf


@dataclass
class SweepReport:
    checked: int = 0
    mismatches: int = 0
    examples: list = field(default_factory=list)

    def record(self, key, got, want, keep: int = 10):
        self.checked += 1
        if got != want:
            self.mismatches += 1
            if len(self.examples) < keep:
                self.examples.append((key, got, want))

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def __str__(self) -> str:
        return f"checked={self.checked} mismatches={self.mismatches}"


def sweep(
    instances: Iterable,
    f: int,
    oracle: Callable,
    truth: Callable,
    f_cap: int = MAX_F,
) -> SweepReport:
    """Diff ``oracle(g, F)`` against ``truth(g, F)`` for every ``|F| <= f``.

    ``instances`` yields graphs; ``oracle`` is called as ``oracle(g)`` once
    per instance and must return a query callable ``q(F)``.
    """
    if f > f_cap:
        raise CapExceeded(f"sweep refuses f={f} > {f_cap}")
    report = SweepReport()
    for idx, g in enumerate(instances):
        _check_caps(g)
        query = oracle(g)
        for size in range(f + 1):
            for failed in combinations(range(g.m), size):
                report.record((idx, failed), query(frozenset(failed)), truth(g, frozenset(failed)))
    return report
