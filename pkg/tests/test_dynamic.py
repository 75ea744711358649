import random

import pytest

from conftest import random_digraph
from sccnt.build import build_csc, build_hpspc
from sccnt.dynamic import (ACCUMULATED, INSERTED, REPLACED, UNCHANGED, CycleIndex, Strategy, UpdateConfig,
                           UpdateStats, WorkloadError, dec_cnt, inc_cnt, parse_workload, update_label)
from sccnt.graph import DirectedGraph, bipartite_convert
from sccnt.labels import VertexOrdering
from sccnt.oracle import oracle_apsp, oracle_sccnt

H = 3


def test_update_label_replaces_shorter():
    lst = [(H, 5, 2, True)]
    assert update_label((H, 4, 1), lst) == REPLACED
    assert lst == [(H, 4, 1, True)]


def test_update_label_accumulates_equal():
    lst = [(H, 5, 2, True)]
    assert update_label((H, 5, 3), lst) == ACCUMULATED
    assert lst[0][:3] == (H, 5, 5)


def test_update_label_keeps_shorter_existing():
    lst = [(H, 4, 1, True)]
    assert update_label((H, 6, 9), lst) == UNCHANGED
    assert lst == [(H, 4, 1, True)]


def test_update_label_inserts_sorted():
    lst = [(1, 2, 1, True), (5, 1, 1, True)]
    assert update_label((H, 3, 2), lst) == INSERTED
    assert [e[0] for e in lst] == [1, H, 5]


def test_config_validation():
    assert UpdateConfig("minimality").strategy is Strategy.MINIMALITY
    with pytest.raises(ValueError):
        UpdateConfig(min_cycle_len=5)
    with pytest.raises(ValueError):
        UpdateConfig(hub_order="random")
    with pytest.raises(ValueError):
        UpdateConfig(seed_count="other")
    with pytest.raises(ValueError):
        UpdateConfig("lazy")


def assert_matches_oracle(ci):
    apsp = oracle_apsp(ci.g)
    for v in range(ci.g.n):
        assert ci.sccnt(v) == oracle_sccnt(ci.g, v, ci.cfg.min_cycle_len, apsp), v
        for t in range(ci.g.n):
            assert tuple(ci.spcnt(v, t)) == apsp[v][t], (v, t)


def fresh_multiset(ci, with_flags=False):
    o = ci.idx.ordering
    idx = build_csc(bipartite_convert(ci.g), o) if ci.mode == "csc" else build_hpspc(ci.g, o)
    return idx.label_multiset(with_flags)


@pytest.mark.parametrize("mode", ["csc", "hpspc"])
def test_fixture_insert(sample, V, mode):
    ci = CycleIndex(sample, mode)
    stats = ci.insert_edge(V(9), V(4))
    assert stats.touched > 0
    assert_matches_oracle(ci)
    # new cycle v4 -> v7 -> v8 -> v9 -> v4
    for k in (4, 7, 8, 9):
        assert ci.sccnt(V(k)).length == 4
    assert tuple(ci.sccnt(V(10))) == (6, 3)


@pytest.mark.parametrize("mode", ["csc", "hpspc"])
def test_fixture_delete(sample, V, mode):
    ci = CycleIndex(sample, mode)
    ci.delete_edge(V(7), V(8))
    assert_matches_oracle(ci)
    assert ci.sccnt(V(7)).length is None


@pytest.mark.parametrize("mode", ["csc", "hpspc"])
def test_triangle_delete(triangle, mode):
    ci = CycleIndex(triangle, mode)
    ci.delete_edge(0, 1)
    for v in range(3):
        assert tuple(ci.sccnt(v)) == (None, 0)


@pytest.mark.parametrize("mode", ["csc", "hpspc"])
def test_duplicate_insert_is_noop(sample, V, mode):
    ci = CycleIndex(sample, mode)
    before = ci.idx.label_multiset()
    stats = ci.insert_edge(V(1), V(4))
    assert stats.touched == 0 and stats == UpdateStats()
    assert ci.idx.label_multiset() == before
    assert ci.delete_edge(V(1), V(10)).touched == 0


def test_pendant_edge_delete_touches_one_entry():
    g = DirectedGraph(3, [(0, 1), (1, 0), (0, 2)])
    ci = CycleIndex(g, "hpspc", ordering=VertexOrdering([0, 1, 2]))
    stats = ci.delete_edge(0, 2)
    assert (stats.deleted, stats.inserted) == (1, 0)
    assert ci.idx.label_multiset() == fresh_multiset(ci)


def test_graph_must_be_updated_first(triangle):
    idx = build_hpspc(triangle)
    with pytest.raises(ValueError):
        inc_cnt(idx, triangle, 0, 2)
    with pytest.raises(ValueError):
        dec_cnt(idx, triangle, 0, 1)


def test_shortcut_cleans_stale_entries():
    # chain 1->2->3->4->5 plus 1->0; the shortcut 0->5 routes 1..5 through top-ranked 0
    g = DirectedGraph(6, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 0)])
    order = VertexOrdering([0, 1, 2, 3, 4, 5])
    red = CycleIndex(g, "hpspc", UpdateConfig("redundancy"), ordering=order)
    mini = CycleIndex(g, "hpspc", UpdateConfig("minimality"), ordering=order)
    for ci in (red, mini):
        ci.insert_edge(0, 5)
        assert_matches_oracle(ci)
    assert mini.idx.label_multiset(True) == fresh_multiset(mini, True)
    assert set(fresh_multiset(red)) < set(red.idx.label_multiset())
    # the leftovers are dominated: their distance exceeds the true one
    apsp = oracle_apsp(red.g)
    for side, owner, hub, d, c in set(red.idx.label_multiset()) - set(fresh_multiset(red)):
        s, t = (hub, owner) if side == "in" else (owner, hub)
        assert d > apsp[s][t][0]


def _random_ops(g, r, k):
    ops = []
    for _ in range(k):
        present = list(g.edges())
        if present and r.random() < 0.5:
            a, b = r.choice(present)
            g.delete_edge(a, b)
            ops.append(("-", a, b))
        else:
            a, b = r.randrange(g.n), r.randrange(g.n)
            if a != b:
                g.insert_edge(a, b)
                ops.append(("+", a, b))
    return ops


@pytest.mark.parametrize("strategy", ["redundancy", "minimality"])
@pytest.mark.parametrize("mode", ["csc", "hpspc"])
@pytest.mark.parametrize("seed", range(12))
def test_random_sequences(seed, mode, strategy):
    g = random_digraph(seed, 5, 20)
    r = random.Random(seed)
    ops = _random_ops(g.copy(), r, 15)
    ci = CycleIndex(g, mode, UpdateConfig(strategy, r.choice([2, 3])))
    for op, a, b in ops:
        ci.apply(op, a, b)
        assert_matches_oracle(ci)
        if strategy == "minimality":
            assert ci.idx.label_multiset(True) == fresh_multiset(ci, True)


@pytest.mark.parametrize("seed", range(15))
def test_ascending_hub_order_still_exact(seed):
    g = random_digraph(seed, 5, 16)
    ops = _random_ops(g.copy(), random.Random(seed), 10)
    ci = CycleIndex(g, "hpspc", UpdateConfig(hub_order="ascending"))
    for op, a, b in ops:
        ci.apply(op, a, b)
        assert_matches_oracle(ci)


def test_path_count_seed_overcounts():
    g = DirectedGraph(5, [(0, 1), (2, 0), (2, 3), (3, 1)])
    order = VertexOrdering([0, 1, 2, 3, 4])
    good = CycleIndex(g, "hpspc", ordering=order)
    bad = CycleIndex(g, "hpspc", UpdateConfig(seed_count="spcnt"), ordering=order)
    good.insert_edge(4, 2)
    bad.insert_edge(4, 2)
    assert tuple(good.spcnt(4, 1)) == (3, 2)
    assert tuple(bad.spcnt(4, 1)) == (3, 3)


def test_frozen_ordering_survives_updates(sample, V):
    ci = CycleIndex(sample, "csc")
    before = ci.idx.ordering
    ci.insert_edge(V(9), V(4))
    assert ci.idx.ordering == before


def test_remove_then_reinsert_restores_index(sample):
    r = random.Random(7)
    edges = r.sample(list(sample.edges()), 10)
    for strategy in ("redundancy", "minimality"):
        ci = CycleIndex(sample, "csc", UpdateConfig(strategy))
        original = ci.idx.label_multiset()
        for a, b in edges:
            ci.delete_edge(a, b)
        for a, b in edges:
            ci.insert_edge(a, b)
        assert_matches_oracle(ci)
        if strategy == "minimality":
            assert ci.idx.label_multiset() == original


def test_parse_workload():
    ops = list(parse_workload(["# header", "+ 1 2", "", "- 3 4  "]))
    assert ops == [("+", "1", "2"), ("-", "3", "4")]


@pytest.mark.parametrize("line", ["* 1 2", "+ 1", "+ 1 2 3", "++ 1 2"])
def test_parse_workload_errors(line):
    with pytest.raises(WorkloadError, match="line 2"):
        list(parse_workload(["+ 0 1", line]))
