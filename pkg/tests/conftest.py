import random
from itertools import combinations

import pytest

from ftoracle.graph import Graph
from ftoracle.vc_dso import VcDso

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_graph(rng: random.Random, n: int, m: int, directed: bool) -> Graph:
    if directed:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        pairs = list(combinations(range(n), 2))
    return Graph(n, rng.sample(pairs, min(m, len(pairs))), directed)


# -- query-time access instrumentation for the distance oracle

ALLOWED = {"f", "_cover_set", "_h_index", "_h_adj", "h_vertices", "h_edges", "cover_out", "cover_in", "cover", "n", "directed"}


class RecordingDict(dict):
    def __init__(self, data, log):
        super().__init__(data)
        self.log = log

    def __getitem__(self, key):
        self.log.append(key)
        return super().__getitem__(key)


class CountingDso(VcDso):
    """Logs every attribute read, and which cover-adjacency rows are touched."""

    def __getattribute__(self, name):
        if not name.startswith("__"):
            object.__getattribute__(self, "reads").add(name)
        return object.__getattribute__(self, name)


def instrumented(o: VcDso):
    c = CountingDso.__new__(CountingDso)
    c.__dict__.update(o.__dict__)
    rows: list = []
    c.cover_out = RecordingDict(o.cover_out, rows)
    c.cover_in = RecordingDict(o.cover_in, rows)
    c.reads = set()
    return c, rows


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (1, 2), (0, 2)], directed=False)


@pytest.fixture
def dipath():
    return Graph(3, [(0, 1), (1, 2)], directed=True)
