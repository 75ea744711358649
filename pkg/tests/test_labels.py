import io

import numpy as np
import pytest

from sccnt.build import build_csc, build_hpspc
from sccnt.graph import DirectedGraph, bipartite_convert
from sccnt.labels import (COUNT_MAX, IndexFormatError, LabelEntry, LabelIndex, QueryResult, VertexOrdering,
                          compute_ordering, decode_entry, encode_entry, is_clamped, load_index, save_index)
from sccnt.query import csc_spcnt, sccnt_csc, spcnt

from conftest import random_digraph
from expected import FIXTURE_ORDER


def _bytes(idx):
    buf = io.BytesIO()
    save_index(idx, buf)
    return buf.getvalue()


def test_fixture_ordering(sample):
    o = compute_ordering(sample)
    assert [int(sample.labels[v]) for v in o.order] == FIXTURE_ORDER
    assert o.precedes(sample.vertex_id(1), sample.vertex_id(7))


def test_triangle_ordering_tie_break(triangle):
    assert compute_ordering(triangle).order.tolist() == [0, 1, 2]


def test_bipartite_ordering(triangle, sample):
    assert compute_ordering(bipartite_convert(triangle)).order.tolist() == [0, 1, 2, 3, 4, 5]
    ob = compute_ordering(bipartite_convert(sample))
    assert ob == compute_ordering(sample).bipartite()


def test_ordering_rejects_non_permutation():
    with pytest.raises(ValueError):
        VertexOrdering([0, 0, 1])


@pytest.mark.parametrize("entry", [(0, 0, 1), (5, 131070, 16777215), (8388607, 7, 3)])
def test_codec_round_trip(entry):
    word = encode_entry(LabelEntry(*entry))
    assert 0 <= word < 1 << 64
    assert tuple(decode_entry(word))[:3] == entry


def test_codec_layout():
    assert encode_entry((0, 0, 1)) == 1
    assert encode_entry((1, 0, 1)) == (1 << 41) | 1
    assert encode_entry((0, 1, 1)) == (1 << 24) | 1


def test_codec_clamps_count():
    e = LabelEntry(5, 3, 1 << 25)
    assert is_clamped(e)
    assert decode_entry(encode_entry(e)) == (5, 3, COUNT_MAX, True)


@pytest.mark.parametrize("entry", [(1 << 23, 0, 1), (0, 131071, 1), (0, 0, 0)])
def test_codec_range_errors(entry):
    with pytest.raises(IndexFormatError):
        encode_entry(entry)


def test_clamp_flag_in_file():
    # a layered DAG with 2^25 shortest paths from source to sink
    layers = 25
    edges = []
    for i in range(layers):
        a, b, c = 3 * i, 3 * i + 1, 3 * i + 2
        nxt = 3 * (i + 1)
        edges += [(a, b), (a, c), (b, nxt), (c, nxt)]
    g = DirectedGraph(3 * layers + 1, edges)
    idx = build_hpspc(g)
    assert spcnt(idx, 0, 3 * layers).count == 1 << 25
    data = _bytes(idx)
    flags = int.from_bytes(data[6:8], "little")
    assert flags & 2
    loaded = load_index(io.BytesIO(data))
    assert loaded.count_clamped
    assert _bytes(loaded) == data


def test_round_trip_fixture(sample, V):
    idx = build_hpspc(sample)
    data = _bytes(idx)
    assert data[:4] == b"CSC1"
    loaded = load_index(io.BytesIO(data))
    assert tuple(spcnt(loaded, V(10), V(8))) == (4, 3)
    assert _bytes(loaded) == data
    assert loaded.label_multiset(True) == idx.label_multiset(True)


def test_round_trip_bipartite(sample, V):
    gb = bipartite_convert(sample)
    idx = build_csc(gb)
    loaded = load_index(io.BytesIO(_bytes(idx)))
    assert loaded.bipartite
    assert tuple(sccnt_csc(loaded, V(7), gb)) == (6, 3)


def test_empty_index():
    idx = build_hpspc(DirectedGraph(0))
    data = _bytes(idx)
    loaded = load_index(io.BytesIO(data))
    assert loaded.n == 0 and loaded.num_entries() == 0
    assert _bytes(loaded) == data


def test_load_errors(sample):
    data = _bytes(build_hpspc(sample))
    with pytest.raises(IndexFormatError, match="magic"):
        load_index(io.BytesIO(b"NOPE" + data[4:]))
    with pytest.raises(IndexFormatError, match="version"):
        load_index(io.BytesIO(data[:4] + b"\x09\x00" + data[6:]))
    with pytest.raises(IndexFormatError, match="truncated"):
        load_index(io.BytesIO(data[:-1]))
    with pytest.raises(IndexFormatError, match="trailing"):
        load_index(io.BytesIO(data + b"\x00"))


def test_inverted_index_matches_labels():
    g = random_digraph(5, 12, 12)
    idx = build_csc(bipartite_convert(g))
    inv_in, inv_out = idx.inverted()
    for v in range(idx.n):
        for e in idx.in_label(v):
            assert v in inv_in[e.hub]
        for e in idx.out_label(v):
            assert v in inv_out[e.hub]
    assert sum(map(len, inv_in)) + sum(map(len, inv_out)) == idx.num_entries()


def test_label_lists_sorted_and_unique():
    g = random_digraph(8, 15, 15)
    idx = build_hpspc(g)
    rank = idx.ordering.rank
    for v in range(g.n):
        for lab in (idx.in_label(v), idx.out_label(v)):
            ranks = [rank[e.hub] for e in lab]
            assert ranks == sorted(set(ranks))
            assert all(rank[e.hub] <= rank[v] and e.count >= 1 for e in lab)
        assert LabelEntry(v, 0, 1, True) in idx.in_label(v)
        assert LabelEntry(v, 0, 1, True) in idx.out_label(v)


def test_query_result():
    assert QueryResult.none() == QueryResult(None, 0)
    length, count = QueryResult(3, 2)
    assert (length, count) == (3, 2)
    assert QueryResult.of(1 << 62, 5) == QueryResult(None, 0)
    assert QueryResult.of(4, (1 << 64) - 1).saturated


def test_csc_spcnt_rejects_plain(sample):
    with pytest.raises(ValueError):
        csc_spcnt(build_hpspc(sample), 0, 1)


def test_packed_and_list_forms_agree(sample):
    idx = build_hpspc(sample)
    before = idx.label_multiset(True)
    idx.lists()
    assert idx.label_multiset(True) == before
    p = idx.packed()
    assert isinstance(p.in_off, np.ndarray) and p.in_off[-1] + p.out_off[-1] == idx.num_entries()
    assert isinstance(LabelIndex, type)
