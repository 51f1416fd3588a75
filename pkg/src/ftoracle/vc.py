"""Vertex Cover under edge failures: solver, kernel and three oracles.

All routines take undirected graphs.  Edge ids in failure sets and in the
stored oracle data always refer to the input graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph, GraphView, check_failures

GraphLike = Graph | GraphView


def _require_undirected(g: GraphLike) -> None:
    if g.directed:
        raise ValueError("vertex cover oracles need an undirected graph")


def _adjacency(g: GraphLike) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for u, v, _ in g.arcs():
        adj.setdefault(u, set()).add(v)
    return adj


def vc_solve(g: GraphLike, k: int) -> set[int] | None:
    """A vertex cover of ``g`` with at most ``k`` vertices, or ``None``.

    Branches on a maximum-degree vertex (take it, or take all of its
    neighbours) after forcing the neighbour of every degree-one vertex.
    """
    _require_undirected(g)
    if k < 0:
        return None
    return _solve(_adjacency(g), k)


def _remove(adj: dict[int, set[int]], v: int) -> None:
    for w in adj.pop(v, ()):
        nb = adj[w]
        nb.discard(v)
        if not nb:
            del adj[w]


def _solve(adj: dict[int, set[int]], k: int) -> set[int] | None:
    adj = {v: set(nb) for v, nb in adj.items()}
    cover: set[int] = set()
    while True:
        if not adj:
            return cover
        if k <= 0:
            return None
        leaf = next((v for v, nb in adj.items() if len(nb) == 1), None)
        if leaf is None:
            break
        w = next(iter(adj[leaf]))
        cover.add(w)
        _remove(adj, w)
        k -= 1
    v = max(adj, key=lambda x: (len(adj[x]), -x))
    nbrs = sorted(adj[v])
    if len(nbrs) > k:
        rest = {x: set(nb) for x, nb in adj.items()}
        _remove(rest, v)
        sub = _solve(rest, k - 1)
        return None if sub is None else cover | sub | {v}
    # edges outnumbering k * maxdeg cannot be covered
    if sum(len(nb) for nb in adj.values()) // 2 > k * len(nbrs):
        return None
    rest = {x: set(nb) for x, nb in adj.items()}
    _remove(rest, v)
    sub = _solve(rest, k - 1)
    if sub is not None:
        return cover | sub | {v}
    rest = {x: set(nb) for x, nb in adj.items()}
    for w in nbrs:
        _remove(rest, w)
    sub = _solve(rest, k - len(nbrs))
    return None if sub is None else cover | sub | set(nbrs)


@dataclass
class VcKernel:
    """High-degree reduced instance.

    ``H`` is relabelled to its non-isolated vertices; ``vertex_map[i]`` is
    the original vertex of H-vertex ``i`` and ``edge_map[j]`` the original
    edge id of H-edge ``j``.
    """

    H: Graph
    k_prime: int
    forced: list[int]
    vertex_map: list[int]
    edge_map: list[int]
    global_no: bool
    f: int
    k: int
    _to_h: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._to_h = {ge: he for he, ge in enumerate(self.edge_map)}

    def restrict(self, failed: Iterable[int]) -> frozenset[int]:
        """Failed original edge ids mapped into H; edges absent from H drop out."""
        return frozenset(self._to_h[e] for e in failed if e in self._to_h)

    def edge_bound(self) -> int:
        return self.f + self.k_prime * (self.f + self.k_prime)

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "k": self.k,
            "k_prime": self.k_prime,
            "forced": self.forced,
            "vertex_map": self.vertex_map,
            "edge_map": self.edge_map,
            "edges": [list(e) for e in self.H.edges],
            "global_no": self.global_no,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VcKernel":
        H = Graph(len(d["vertex_map"]), [tuple(e) for e in d["edges"]], directed=False)
        return cls(H, d["k_prime"], d["forced"], d["vertex_map"], d["edge_map"], d["global_no"], d["f"], d["k"])


def vc_kernel(g: Graph, f: int, k: int) -> VcKernel:
    """Exhaustive high-degree reduction with threshold ``k' + f``.

    For every ``|F| <= f``: ``G - F`` has a ``k``-cover iff ``H - F`` has a
    ``k'``-cover (``global_no`` meaning never).
    """
    _require_undirected(g)
    if f < 0 or k < 0:
        raise ValueError("need f, k >= 0")
    alive_edges = set(range(g.m))
    deg = [g.degree(v) for v in range(g.n)]
    budget = k
    forced: list[int] = []
    global_no = False
    while True:
        high = [v for v in range(g.n) if deg[v] > budget + f]
        if not high:
            break
        v = min(high)
        forced.append(v)
        budget -= 1
        for e, w in g.out_arcs(v):
            if e in alive_edges:
                alive_edges.discard(e)
                deg[w] -= 1
        deg[v] = 0
        if budget < 0:
            global_no = True
            break
    kept = sorted(alive_edges)
    if not global_no and len(kept) > f + budget * (f + budget):
        global_no = True
    if global_no:
        kept = []
    verts = sorted({x for e in kept for x in g.edges[e]})
    relabel = {v: i for i, v in enumerate(verts)}
    H = Graph(len(verts), [(relabel[g.edges[e][0]], relabel[g.edges[e][1]]) for e in kept], directed=False)
    return VcKernel(H, budget, forced, verts, kept, global_no, f, k)


# -- kernel oracle --------------------------------------------------------


@dataclass
class VcKernelOracle:
    kernel: VcKernel

    @property
    def f(self) -> int:
        return self.kernel.f

    def to_dict(self) -> dict:
        return {"kernel": self.kernel.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "VcKernelOracle":
        return cls(VcKernel.from_dict(d["kernel"]))


def build_kernel_oracle(g: Graph, f: int, k: int) -> VcKernelOracle:
    return VcKernelOracle(vc_kernel(g, f, k))


def query_kernel_oracle(o: VcKernelOracle, failed: Iterable[int]) -> bool:
    fs = check_failures(failed, o.f)
    ker = o.kernel
    if ker.global_no:
        return False
    if ker.H.m == 0:
        return True
    return vc_solve(ker.H.without(ker.restrict(fs)), ker.k_prime) is not None


# -- subset oracle ----------------------------------------------------------


@dataclass
class VcSubsetOracle:
    """Failure sets (original edge ids, sorted tuples) after which a cover exists."""

    family: set[tuple[int, ...]]
    f: int
    k: int

    def to_dict(self) -> dict:
        return {"f": self.f, "k": self.k, "family": sorted(list(t) for t in self.family)}

    @classmethod
    def from_dict(cls, d: dict) -> "VcSubsetOracle":
        return cls({tuple(t) for t in d["family"]}, d["f"], d["k"])


def build_subset_oracle(g: Graph, f: int, k: int) -> VcSubsetOracle:
    """Three-way branching (take u, take v, fail uv) on the kernel."""
    ker = vc_kernel(g, f, k)
    family: set[tuple[int, ...]] = set()
    if ker.global_no:
        return VcSubsetOracle(family, f, k)
    H, kk = ker.H, ker.k_prime
    edges = H.edges

    def branch(live: frozenset[int], c_size: int, failed: tuple[int, ...]):
        if not live:
            family.add(tuple(sorted(ker.edge_map[e] for e in failed)))
            return
        e = min(live)
        u, v = edges[e]
        if c_size < kk:
            for x in (u, v):
                branch(frozenset(d for d in live if x not in edges[d]), c_size + 1, failed)
        if len(failed) < f:
            branch(live - {e}, c_size, failed + (e,))

    branch(frozenset(range(H.m)), 0, ())
    return VcSubsetOracle(family, f, k)


def query_subset_oracle(o: VcSubsetOracle, failed: Iterable[int]) -> bool:
    fs = sorted(check_failures(failed, o.f))
    for mask in range(1 << len(fs)):
        sub = tuple(e for i, e in enumerate(fs) if mask >> i & 1)
        if sub in o.family:
            return True
    return False


# -- binary lookup tree -----------------------------------------------------


@dataclass
class VcTreeOracle:
    """Binary lookup tree in arena form.

    ``edge[i]`` is the branching edge (original id) of node ``i`` or ``-1``
    at a leaf; ``child0``/``child1`` follow the fail/safe arcs (``-1`` when
    absent); ``value[i]`` is the stored answer at a leaf.  A missing safe
    child means the safe budget ran out and the answer is no.
    """

    edge: list[int]
    child0: list[int]
    child1: list[int]
    value: list[bool]
    f: int
    k: int

    @property
    def size(self) -> int:
        return len(self.edge)

    def depth(self) -> int:
        best = 0
        stack = [(0, 0)]
        while stack:
            i, d = stack.pop()
            best = max(best, d)
            for c in (self.child0[i], self.child1[i]):
                if c >= 0:
                    stack.append((c, d + 1))
        return best

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "k": self.k,
            "nodes": [[e, a, b, v] for e, a, b, v in zip(self.edge, self.child0, self.child1, self.value)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VcTreeOracle":
        cols = list(zip(*d["nodes"])) if d["nodes"] else [(), (), (), ()]
        return cls(list(cols[0]), list(cols[1]), list(cols[2]), [bool(x) for x in cols[3]], d["f"], d["k"])


def build_vctree_oracle(g: Graph, f: int, k: int) -> VcTreeOracle:
    ker = vc_kernel(g, f, k)
    o = VcTreeOracle([], [], [], [], f, k)
    if ker.global_no:
        _new_node(o, -1, False)
        return o
    H, kk = ker.H, ker.k_prime
    safe_cap = kk * (kk + 1)
    incident = [[e for e, _ in H.out_arcs(v)] for v in range(H.n)]
    leaf_cache: dict[frozenset[int], bool] = {}

    # An emptied working graph is not by itself a certificate: a safe edge
    # counts toward both endpoints, so K4 with k=2 empties out although it
    # has no 2-cover.  Every leaf asks the solver.
    def leaf_value(failed: frozenset[int]) -> bool:
        if failed not in leaf_cache:
            leaf_cache[failed] = vc_solve(H.without(failed), kk) is not None
        return leaf_cache[failed]

    def build(safe: frozenset[int], failed: frozenset[int], alive: frozenset[int], work: frozenset[int]) -> int:
        branchable = work - safe
        if not branchable:
            return _new_node(o, -1, leaf_value(failed))
        e = min(branchable)
        i = _new_node(o, ker.edge_map[e], False)
        if len(failed) < f:
            o.child0[i] = build(safe, failed | {e}, alive, work - {e})
        if len(safe) < safe_cap:
            s2 = safe | {e}
            alive2, work2 = set(alive), set(work)
            changed = True
            while changed:
                changed = False
                for v in sorted(alive2):
                    if sum(1 for d in incident[v] if d in s2) > kk:
                        alive2.discard(v)
                        work2.difference_update(incident[v])
                        changed = True
            o.child1[i] = build(s2, failed, frozenset(alive2), frozenset(work2))
        return i

    build(frozenset(), frozenset(), frozenset(range(H.n)), frozenset(range(H.m)))
    return o


def _new_node(o: VcTreeOracle, edge: int, value: bool) -> int:
    o.edge.append(edge)
    o.child0.append(-1)
    o.child1.append(-1)
    o.value.append(value)
    return len(o.edge) - 1


def query_vctree_oracle(o: VcTreeOracle, failed: Iterable[int]) -> bool:
    fs = check_failures(failed, o.f)
    i = 0
    while o.edge[i] >= 0:
        if o.edge[i] in fs:
            nxt = o.child0[i]
            assert nxt >= 0, "fail arc missing although the failure budget was not spent"
        else:
            nxt = o.child1[i]
            if nxt < 0:
                return False
        i = nxt
    return o.value[i]
