"""Subgraph-sampling k-Path sensitivity oracle with one-sided error."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .graph import Graph, check_failures
from .kpath import KPath, SolverConfig, find_k_path
from .kpath_tree import FAILURE_DICT, PATH_DICT


def r_count(f: int, k: int, n: int) -> int:
    """Number of sampled subgraphs: ``ceil(((f+k)/f)^f ((f+k)/k)^k * 6 f ln n)``."""
    if f == 0:
        return 1
    if f < 0 or k < 1 or n < 2:
        raise ValueError("need f >= 1, k >= 1, n >= 2")
    return math.ceil(((f + k) / f) ** f * ((f + k) / k) ** k * 6 * f * math.log(n))


@dataclass
class SampledPathOracle:
    paths: list[KPath]
    r: int
    f: int
    k: int
    n: int
    seed: int | None
    mode: str = PATH_DICT
    _sets: list[frozenset[int]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self._sets:
            self._sets = [p.edge_set for p in self.paths]

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "f": self.f,
            "k": self.k,
            "n": self.n,
            "seed": self.seed,
            "mode": self.mode,
            "paths": [p.to_list() for p in self.paths],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampledPathOracle":
        return cls([KPath.from_list(p) for p in d["paths"]], d["r"], d["f"], d["k"], d["n"], d["seed"], d["mode"])


def sample_deletions(m: int, f: int, k: int, r: int, seed: int | None) -> np.ndarray:
    """``r x m`` boolean matrix; row ``i`` marks the edges deleted in sample ``i``."""
    p = f / (f + k)
    return np.random.default_rng(seed).random((r, m)) < p


def build_sampling_oracle(
    g: Graph,
    f: int,
    k: int,
    seed: int | None = 0,
    solver: SolverConfig | None = None,
    dedup: bool = True,
    cache: dict | None = None,
) -> SampledPathOracle:
    """Sample ``r_count(f, k, n)`` subgraphs keeping each edge w.p. ``k/(f+k)``.

    ``cache`` maps a frozenset of deleted edges to the solver result and may
    be shared across builds on the same graph when the solver is
    deterministic.
    """
    if f < 0 or k < 1:
        raise ValueError("need f >= 0 and k >= 1")
    solver = solver or SolverConfig(mode="exhaustive" if g.n <= 16 else "auto", seed=seed)
    r = r_count(f, k, max(g.n, 2))
    deleted = sample_deletions(g.m, f, k, r, seed)
    if cache is None:
        cache = {}
    paths: list[KPath] = []
    seen: set[frozenset[int]] = set()
    for row in deleted:
        gone = frozenset(np.nonzero(row)[0].tolist())
        if gone in cache:
            found = cache[gone]
        else:
            found = find_k_path(g.without(gone), k, solver)
            if solver.mode == "exhaustive":
                cache[gone] = found
        if found is None:
            continue
        if dedup:
            if found.edge_set in seen:
                continue
            seen.add(found.edge_set)
        paths.append(found)
    mode = FAILURE_DICT if f > k else PATH_DICT
    return SampledPathOracle(paths, r, f, k, g.n, seed, mode)


def query_sampling(o: SampledPathOracle, failed: Iterable[int]) -> KPath | None:
    """First stored path avoiding ``F``; a ``None`` may be a false negative."""
    fs = check_failures(failed, o.f)
    if o.mode == FAILURE_DICT:
        for path in o.paths:
            if not any(e in fs for e in path.edges):
                return path
        return None
    order = list(fs)
    for path, es in zip(o.paths, o._sets):
        if not any(e in es for e in order):
            return path
    return None


def keep_probability(f: int, k: int) -> float:
    """Probability that a fixed k-path survives one sample."""
    return (k / (f + k)) ** (k - 1)
