import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from ftoracle.errors import CapacityError, GraphParseError
from ftoracle.graph import (
    FailureSet,
    Graph,
    bfs_levels,
    failure_sets,
    parse_failures,
    parse_graph,
    split_vertices,
    subgraph_minus,
)

from conftest import random_graph


def test_parse_directed():
    g = parse_graph("3 2 d\n0 1\n1 2")
    assert (g.n, g.m, g.directed) == (3, 2, True)
    assert g.edges == [(0, 1), (1, 2)]
    assert g.out_arcs(1) == [(1, 2)]
    assert g.in_arcs(1) == [(0, 0)]


def test_parse_undirected_single_id():
    g = parse_graph("2 1 u\n0 1")
    assert g.m == 1
    assert g.out_arcs(0) == [(0, 1)]
    assert g.out_arcs(1) == [(0, 0)]
    assert g.edge_id(1, 0) == g.edge_id(0, 1) == 0


@pytest.mark.parametrize(
    "text, msg",
    [
        ("2 1 d\n0 5", "vertex 5 out of range at line 2"),
        ("2 1 x\n0 1", "malformed header, expected 'n m d|u' at line 1"),
        ("3 2 d\n0 1\n0 1", "duplicate edge (0, 1) at line 3"),
        ("3 1 d\n1 1", "self-loop at vertex 1 at line 2"),
        ("3 2 d\n0 1", "expected 2 edge lines, found 1 at line 1"),
        ("3 1 u\n0 a", "non-integer vertex at line 2"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(GraphParseError) as exc:
        parse_graph(text)
    assert str(exc.value) == msg


def test_undirected_duplicate_reversed_rejected():
    with pytest.raises(GraphParseError, match="duplicate"):
        parse_graph("2 2 u\n0 1\n1 0")


def test_text_roundtrip():
    g = random_graph(random.Random(3), 7, 12, True)
    assert parse_graph(g.to_text()) == g


def test_parse_failures():
    assert parse_failures("0 3\n\n2") == [frozenset({0, 3}), frozenset(), frozenset({2})]


def test_failure_set_capacity():
    fs = FailureSet([1, 2], capacity=2, m=5)
    assert 1 in fs and 3 not in fs and len(fs) == 2
    with pytest.raises(CapacityError):
        FailureSet([1, 2, 3], capacity=2)
    with pytest.raises(ValueError):
        FailureSet([7], m=5)


def test_split_vertices_path():
    g = Graph(3, [(0, 1), (1, 2)])
    sg, smap = split_vertices(g)
    assert (sg.n, sg.m) == (6, 5)
    assert sg.edges[:2] == [(3, 1), (4, 2)]
    assert [smap.forward[v] for v in range(3)] == [(0, 3, 2), (1, 4, 3), (2, 5, 4)]
    assert smap.inverse == {2: 0, 3: 1, 4: 2}


def test_split_single_vertex():
    sg, smap = split_vertices(Graph(1, []))
    assert (sg.n, sg.m) == (2, 1)
    assert sg.edges == [(0, 1)]


def test_split_reversible():
    for seed in range(20):
        rng = random.Random(seed)
        g = random_graph(rng, rng.randint(1, 8), rng.randint(0, 15), True)
        sg, smap = split_vertices(g)
        back = [(sg.edges[e][0] - g.n, sg.edges[e][1]) for e in range(sg.m) if e not in smap.inverse]
        assert back == g.edges
        assert all(g.edges[smap.origin[e]] == back[e] for e in smap.origin)


def test_split_vertex_failure_equivalent_to_bridge_failure():
    # reachability s -> t avoiding vertex set S  <=>  s_out -> t_in avoiding bridges of S
    from ftoracle.graph import reachable_from

    for seed in range(30):
        rng = random.Random(seed)
        g = random_graph(rng, 6, 10, True)
        sg, smap = split_vertices(g)
        for S in failure_sets(g.n, 2):
            allowed = [v for v in range(g.n) if v not in S]
            keep = [e for e, (u, v) in enumerate(g.edges) if u not in S and v not in S]
            induced = Graph(g.n, [g.edges[e] for e in keep])
            view = sg.without(smap.bridges(S))
            for s in allowed:
                want = reachable_from(induced, s)
                got = {v for v in reachable_from(view, s + g.n) if v < g.n}
                assert (want - {s}) <= got | {s}
                assert {v for v in got if v not in S} | {s} == want | {s}


def test_bfs_levels_examples():
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert bfs_levels(star, 0)[0] == [0, 1, 1, 1]
    assert bfs_levels(Graph(3, [(0, 1), (1, 2)]), 0)[0] == [0, 1, 2]
    lv, parent = bfs_levels(Graph(3, [(0, 1)]), 0)
    assert lv[2] == math.inf and parent[2] == -1


def test_bfs_parent_smallest_edge():
    # two shortest routes into 3; edge (2,3) has the smaller id
    g = Graph(4, [(0, 1), (0, 2), (2, 3), (1, 3)])
    _, parent = bfs_levels(g, 0)
    assert parent == [-1, 0, 1, 2]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 20), st.booleans(), st.integers(0, 10**6))
def test_bfs_triangle_property(n, m, directed, seed):
    g = random_graph(random.Random(seed), n, m, directed)
    level, parent = bfs_levels(g, 0)
    for a, b, _ in g.arcs():
        if level[a] != math.inf:
            assert level[b] <= level[a] + 1
    for v in range(n):
        if parent[v] >= 0:
            u, w = g.edges[parent[v]]
            tail = u if w == v else w
            assert level[tail] == level[v] - 1


def test_subgraph_minus_examples(triangle):
    assert list(subgraph_minus(triangle, []).arcs()) == list(triangle.arcs())
    assert list(subgraph_minus(triangle, range(3)).arcs()) == []
    view = subgraph_minus(triangle, [1])
    assert view.out_arcs(1) == [(0, 0)]
    assert len(view.out_arcs(1)) == len(triangle.out_arcs(1)) - 1


def test_subgraph_minus_exhaustive():
    rng = random.Random(11)
    for _ in range(5):
        g = random_graph(rng, 7, 9, True)
        for F in failure_sets(g.m, g.m):
            view = g.without(F)
            assert set(view.edge_ids()) == set(range(g.m)) - F
            assert {e for _, _, e in view.arcs()} == set(range(g.m)) - F
