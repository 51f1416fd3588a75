"""Fault-tolerant lookup tree for k-Path.

Each node ``N_S`` stores a k-path of ``G - S`` (or nothing when none
exists); a node with a path and ``|S| < f`` has one child per path edge
``e``, built for ``S + {e}``.  A query walks from the root, descending
through any failed edge of the current path, and stops after at most
``|F|`` steps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph, check_failures
from .kpath import KPath, SolverConfig, find_k_path

PATH_DICT = "path-dictionary"
FAILURE_DICT = "failure-dictionary"


@dataclass
class TreeNode:
    path: KPath | None
    children: dict[int, int] = field(default_factory=dict)
    parent_edge: int = -1
    depth: int = 0

    def __post_init__(self):
        self.edge_set = self.path.edge_set if self.path is not None else frozenset()


@dataclass
class FtLookupTree:
    nodes: list[TreeNode]
    f: int
    k: int
    mode: str = PATH_DICT
    exact: bool = True
    root: int = 0

    @property
    def size(self) -> int:
        return len(self.nodes)

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "k": self.k,
            "mode": self.mode,
            "exact": self.exact,
            "nodes": [
                {
                    "id": i,
                    "parent_edge": nd.parent_edge,
                    "depth": nd.depth,
                    "path": None if nd.path is None else nd.path.to_list(),
                    "children": [[e, c] for e, c in sorted(nd.children.items())],
                }
                for i, nd in enumerate(self.nodes)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FtLookupTree":
        nodes = [
            TreeNode(
                None if nd["path"] is None else KPath.from_list(nd["path"]),
                {e: c for e, c in nd["children"]},
                nd["parent_edge"],
                nd["depth"],
            )
            for nd in d["nodes"]
        ]
        return cls(nodes, d["f"], d["k"], d["mode"], d["exact"])


def node_bound(f: int, k: int) -> int:
    return sum((k - 1) ** i for i in range(f + 1))


def choose_mode(f: int, k: int) -> str:
    # failure dictionary wins once f exceeds k
    return FAILURE_DICT if f > k else PATH_DICT


def build_tree_oracle(
    g: Graph,
    f: int,
    k: int,
    solver: SolverConfig | None = None,
    mode: str | None = None,
) -> FtLookupTree:
    if f < 0 or k < 1:
        raise ValueError("need f >= 0 and k >= 1")
    solver = solver or SolverConfig(mode="exhaustive" if g.n <= 16 else "auto")
    exact = solver.mode == "exhaustive" or (solver.mode == "auto" and k <= 8)
    nodes = [TreeNode(find_k_path(g, k, solver))]
    failed_at = [frozenset()]
    todo = deque([0])
    while todo:
        i = todo.popleft()
        nd = nodes[i]
        if nd.path is None or nd.depth >= f:
            continue
        for e in nd.path.edges:
            s = failed_at[i] | {e}
            child = TreeNode(find_k_path(g.without(s), k, solver), parent_edge=e, depth=nd.depth + 1)
            nd.children[e] = len(nodes)
            nodes.append(child)
            failed_at.append(s)
            todo.append(len(nodes) - 1)
    return FtLookupTree(nodes, f, k, mode or choose_mode(f, k), exact)


def query_tree(t: FtLookupTree, failed: Iterable[int]) -> KPath | None:
    """A k-path of ``G - F`` or ``None``; exact when the build solver was exact."""
    fs = check_failures(failed, t.f)
    node = t.nodes[t.root]
    if t.mode == FAILURE_DICT:
        while node.path is not None:
            hit = [e for e in node.path.edges if e in fs]
            if not hit:
                return node.path
            node = t.nodes[node.children[min(hit)]]
        return None
    order = sorted(fs)
    while node.path is not None:
        for e in order:
            if e in node.edge_set:
                node = t.nodes[node.children[e]]
                break
        else:
            return node.path
    return None
