"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s``; the lines are also
collected into the terminal summary.
"""

import random
import time
from collections import Counter

import pytest

from ftoracle.cli import main
from ftoracle.detour import (
    build_aux_graph,
    build_detour_oracle,
    build_preserver,
    enumerate_Y,
    preserver_bound,
    query_detour,
    verify_preserver,
    x_sequence,
    _bfs_reaches,
)
from ftoracle.fieldreach import P61, build_field_oracle, field_value, query_reach
from ftoracle.generators import c4_pendant, layered_dag, star_forest
from ftoracle.graph import INF, bfs_levels, failure_sets, reachable_from
from ftoracle.groundtruth import bf_detour, bf_dist, bf_kpath, bf_reach, bf_vc
from ftoracle.harness import smallest_cover
from ftoracle.kpath import SolverConfig
from ftoracle.kpath_sampling import build_sampling_oracle, query_sampling, r_count
from ftoracle.kpath_tree import build_tree_oracle, node_bound, query_tree
from ftoracle.vc import (
    build_kernel_oracle,
    build_subset_oracle,
    build_vctree_oracle,
    query_kernel_oracle,
    query_subset_oracle,
    query_vctree_oracle,
    vc_kernel,
    vc_solve,
)
from ftoracle.vc_dso import build_vc_dso, query_vc_dso

from conftest import ACCEPTANCE_LINES, ALLOWED, instrumented, random_graph


def report(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def family(count: int, n_max: int, m_max: int, seed: int, directed=None, n_min: int = 3):
    """Seeded instances; ``directed=None`` alternates orientation."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        d = (i % 2 == 0) if directed is None else directed
        n = rng.randint(n_min, n_max)
        out.append(random_graph(rng, n, rng.randint(2, m_max), d))
    return out


KPATH_FAMILY = family(50, 10, 14, seed=101)
KPATH_GRID = [(f, k) for f in range(3) for k in range(1, 5)]


@pytest.fixture(scope="module")
def kpath_truth():
    truth = {}
    for idx, g in enumerate(KPATH_FAMILY):
        for F in failure_sets(g.m, 2):
            for k in range(1, 5):
                truth[idx, F, k] = bf_kpath(g, F, k)
    return truth


def test_criterion_01_kpath_tree_exact(kpath_truth):
    t0 = time.perf_counter()
    mismatches = checked = over_bound = invalid = 0
    solver = SolverConfig("exhaustive")
    for idx, g in enumerate(KPATH_FAMILY):
        for f, k in KPATH_GRID:
            t = build_tree_oracle(g, f, k, solver)
            over_bound += t.size > node_bound(f, k)
            for F in failure_sets(g.m, f):
                got = query_tree(t, F)
                checked += 1
                mismatches += (got is not None) != kpath_truth[idx, F, k]
                invalid += got is not None and not got.is_valid(g.without(F), k)
    secs = time.perf_counter() - t0
    ok = mismatches == 0 and over_bound == 0 and invalid == 0 and secs < 120
    report(1, ok, f"queries={checked} mismatches={mismatches} node_bound_violations={over_bound} time={secs:.1f}s")


def test_criterion_02_kpath_sampling(kpath_truth):
    false_pos = false_neg = positives = checked = bad_r = 0
    caches: dict = {}
    for seed in range(100):
        idx = seed % len(KPATH_FAMILY)
        g = KPATH_FAMILY[idx]
        for f, k in KPATH_GRID:
            cache = caches.setdefault((idx, k), {})
            o = build_sampling_oracle(g, f, k, seed=seed, solver=SolverConfig("exhaustive"), cache=cache)
            bad_r += o.r != r_count(f, k, max(g.n, 2))
            for F in failure_sets(g.m, f):
                want = kpath_truth[idx, F, k]
                got = query_sampling(o, F)
                checked += 1
                positives += want
                if got is not None:
                    false_pos += not got.is_valid(g.without(F), k)
                elif want:
                    false_neg += 1
    rate = false_neg / max(positives, 1)
    ok = false_pos == 0 and rate < 0.01 and bad_r == 0 and r_count(1, 1, 16) == 67
    report(
        2,
        ok,
        f"queries={checked} false_pos={false_pos} false_neg={false_neg}/{positives} ({rate:.4%}) "
        f"r_count_mismatch={bad_r} r(1,1,16)={r_count(1, 1, 16)}",
    )


VC_FAMILY = family(50, 8, 12, seed=202, directed=False, n_min=2)
VC_MANDATORY = [(c4_pendant(), 2, 2), (star_forest(2, 2), 2, 1)]


def _vc_cases():
    for g in VC_FAMILY:
        for f in range(3):
            for k in range(4):
                yield g, f, k
    yield from VC_MANDATORY


def test_criterion_03_vc_triple_agreement():
    mism = Counter()
    checked = bounds = 0
    for g, f, k in _vc_cases():
        sub = build_subset_oracle(g, f, k)
        tree = build_vctree_oracle(g, f, k)
        ker = build_kernel_oracle(g, f, k)
        bounds += len(sub.family) > 3 ** (f + k)
        bounds += tree.size > 2 ** (f + k * (k + 1) + 1)
        for F in failure_sets(g.m, f):
            want = bf_vc(g, F, k)
            checked += 1
            mism["subset"] += query_subset_oracle(sub, F) != want
            mism["tree"] += query_vctree_oracle(tree, F) != want
            mism["kernel"] += query_kernel_oracle(ker, F) != want
    ok = sum(mism.values()) == 0 and bounds == 0
    report(
        3,
        ok,
        f"queries={checked} mismatches subset={mism['subset']} tree={mism['tree']} kernel={mism['kernel']} "
        f"bound_violations={bounds} (c4-pendant and star-forest included)",
    )


def test_criterion_04_vc_kernel_sound():
    violations = checked = size_violations = 0
    for g, f, k in _vc_cases():
        ker = vc_kernel(g, f, k)
        size_violations += not ker.global_no and ker.H.m > f + ker.k_prime * (f + ker.k_prime)
        for F in failure_sets(g.m, f):
            checked += 1
            lhs = vc_solve(g.without(F), k) is not None
            if ker.global_no:
                rhs = False
            else:
                rhs = vc_solve(ker.H.without(ker.restrict(F)), ker.k_prime) is not None
            violations += lhs != rhs
    ok = violations == 0 and size_violations == 0
    report(4, ok, f"(instance, F) pairs={checked} violations={violations} size_violations={size_violations}")


DSO_FAMILY = family(30, 10, 14, seed=303)


def test_criterion_05_vc_dso():
    mismatches = checked = stray_reads = stray_rows = over_2k = 0
    for g in DSO_FAMILY:
        cover = smallest_cover(g)
        for f in (1, 2):
            spy, rows = instrumented(build_vc_dso(g, cover, f))
            for F in failure_sets(g.m, f):
                cover_k = None
                if not g.directed:
                    cover_k = next(k for k in range(g.n + 1) if bf_vc(g, F, k))
                for u in range(g.n):
                    for v in range(g.n):
                        rows.clear()
                        got = query_vc_dso(spy, u, v, F)
                        stray_rows += not set(rows) <= {u, v}
                        checked += 1
                        mismatches += got != bf_dist(g, F, u, v)
                        if cover_k is not None and got != INF:
                            over_2k += got > 2 * cover_k
            stray_reads += len(spy.reads - {"reads"} - ALLOWED)
    ok = mismatches == 0 and stray_reads == 0 and stray_rows == 0 and over_2k == 0
    report(
        5,
        ok,
        f"queries={checked} mismatches={mismatches} reads_outside_H_or_cover_adj={stray_reads + stray_rows} "
        f"finite_answers_over_2k={over_2k}",
    )


DETOUR_FAMILY = family(30, 8, 12, seed=404)


def _signature_reach(g, lv, F, Y):
    """(v, prefix) states reachable from s along walks of G - F whose positive slacks form a prefix of Y."""
    view = g.without(F)
    seen = {(0, ())}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v, sig in frontier:
            for _, w in view.out_arcs(v):
                if lv[w] == INF:
                    continue
                x = int(1 + lv[v] - lv[w])
                s2 = sig + (x,) if x > 0 else sig
                if Y[: len(s2)] != s2 or (w, s2) in seen:
                    continue
                seen.add((w, s2))
                nxt.append((w, s2))
        frontier = nxt
    return seen


def test_criterion_06_layered_lemmas():
    sum_checked = sum_bad = eq_checked = eq_bad = 0
    for g in DETOUR_FAMILY:
        lv, _ = bfs_levels(g, 0)
        auxes = [build_aux_graph(g, 0, Y, lv) for Y in enumerate_Y(2)]
        for F in failure_sets(g.m, 2):
            dist, parent = bfs_levels(g.without(F), 0)
            for v in range(g.n):
                if dist[v] == INF:
                    continue
                path = [v]
                while path[-1] != 0:
                    a, b = g.edges[parent[path[-1]]]
                    path.append(a if b == path[-1] else b)
                _, plus = x_sequence(path[::-1], lv)
                sum_checked += 1
                sum_bad += sum(plus) != bf_dist(g, F, 0, v) - bf_dist(g, (), 0, v)
            for aux in auxes:
                states = _signature_reach(g, lv, F, aux.Y)
                lifted = aux.lift(F)
                for v in range(g.n):
                    eq_checked += 1
                    eq_bad += ((v, aux.Y) in states) != _bfs_reaches(aux.graph, aux.source, aux.target(v), lifted)
    sizes_ok = all(len(enumerate_Y(k)) == 2**k for k in range(8)) and len(enumerate_Y(3)) - 1 == 7
    ok = sum_bad == 0 and eq_bad == 0 and sizes_ok
    report(
        6,
        ok,
        f"sum identity {sum_checked - sum_bad}/{sum_checked}, layered equivalence {eq_checked - eq_bad}/{eq_checked}, "
        f"|Y(k)|=2^k for k<8: {sizes_ok}",
    )


def test_criterion_07_preserver():
    violations = builds = 0
    kept_total = bound_total = 0
    for g in DETOUR_FAMILY:
        for f in range(3):
            for k in range(3):
                p = build_preserver(g, 0, f, k)
                rep = verify_preserver(g, 0, f, k, p.kept)
                violations += len(rep.violations)
                builds += 1
                kept_total += len(p.kept)
                bound_total += preserver_bound(f, k, g.n)
    report(
        7,
        violations == 0,
        f"builds={builds} violations={violations} kept_edges_total={kept_total} "
        f"formula_total={bound_total} (informational)",
    )


def test_criterion_08_detour_oracle():
    bfs_bad = bfs_checked = 0
    for g in DETOUR_FAMILY:
        for k in range(3):
            o = build_detour_oracle(g, 0, k, "bfs", f=2)
            for F in failure_sets(g.m, 2):
                for v in range(g.n):
                    bfs_checked += 1
                    bfs_bad += query_detour(o, v, F) != bf_detour(g, 0, v, F, k)

    rng = random.Random(808)
    built = {}
    agree = 0
    trials = 10_000
    for _ in range(trials):
        idx, k = rng.randrange(len(DETOUR_FAMILY)), rng.randrange(3)
        g = DETOUR_FAMILY[idx]
        if (idx, k) not in built:
            built[idx, k] = build_detour_oracle(g, 0, k, "algebraic", f=2, seed=idx * 10 + k)
        F = frozenset(rng.sample(range(g.m), min(g.m, rng.randint(0, 2))))
        v = rng.randrange(g.n)
        agree += query_detour(built[idx, k], v, F) == bf_detour(g, 0, v, F, k)

    # exact update consistency: Woodbury answer equals a rebuild on the lifted G - F with pinned weights
    consistent = 0
    for idx, g in enumerate(DETOUR_FAMILY):
        o = built.get((idx, 2)) or build_detour_oracle(g, 0, 2, "algebraic", f=2, seed=idx * 10 + 2)
        sets = list(failure_sets(g.m, 2))
        picks = random.Random(idx).sample(sets, min(6, len(sets)))
        good = True
        for aux, fo in zip(o.aux, o.field):
            pinned = dict(zip(fo.arcs, fo.x))
            for F in picks:
                lifted = aux.lift(F)
                fresh = build_field_oracle(aux.graph.without(lifted), weights=pinned)
                s = aux.source
                good &= all(field_value(fo, s, t, lifted) == fresh.inv[s][t] for t in range(aux.graph.n))
        consistent += good
    rate = agree / trials
    ok = bfs_bad == 0 and rate >= 0.999 and consistent == len(DETOUR_FAMILY)
    report(
        8,
        ok,
        f"bfs mismatches={bfs_bad}/{bfs_checked}, algebraic agreement={rate:.4%} over {trials}, "
        f"update-consistent instances={consistent}/{len(DETOUR_FAMILY)}",
    )


def _weighted_path_sum(g, x, s, t, p):
    total = 0
    stack = [(s, 1)]
    while stack:
        v, w = stack.pop()
        if v == t:
            total += w
        for e, u in g.out_arcs(v):
            stack.append((u, w * x[e] % p))
    return total % p


def test_criterion_09_field_reachability():
    rng = random.Random(909)
    agree = trials = 0
    while trials < 10_000:
        g = random_graph(rng, rng.randint(2, 10), rng.randint(1, 16), rng.random() < 0.75)
        o = build_field_oracle(g, seed=rng.randrange(1 << 30))
        for _ in range(50):
            F = rng.sample(range(g.m), min(g.m, rng.randint(0, 3)))
            s, t = rng.randrange(g.n), rng.randrange(g.n)
            agree += query_reach(o, s, t, F) == bf_reach(g, F, s, t)
            trials += 1
    entries = exact = 0
    for seed in range(100):
        g = layered_dag(4, 2, 0.6, seed=seed)
        o = build_field_oracle(g, seed=seed)
        x = {e: w for (_, _, e), w in zip(o.arcs, o.x)}
        for s in range(g.n):
            reach = reachable_from(g, s)
            for t in range(g.n):
                entries += 1
                exact += o.inv[s][t] == _weighted_path_sum(g, x, s, t, P61) and (o.inv[s][t] != 0) == (t in reach)
    rate = agree / trials
    ok = rate >= 0.999 and exact == entries
    report(9, ok, f"agreement={rate:.4%} over {trials} trials, DAG walk-sum identity {exact}/{entries}")


def test_criterion_10_roundtrip_and_verify(capsys):
    t0 = time.perf_counter()
    code = main(["verify", "all", "--seed", "0"])
    secs = time.perf_counter() - t0
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if ln.startswith(("PASS", "FAIL"))]
    roundtrip_bad = sum(int(ln.split("roundtrip=")[1].split()[0]) for ln in lines)
    kinds = len(lines)
    ok = code == 0 and kinds == 9 and roundtrip_bad == 0 and secs < 600
    for ln in lines:
        print("   ", ln)
    report(10, ok, f"verify all exit={code} kinds={kinds} roundtrip_mismatches={roundtrip_bad} time={secs:.1f}s")
