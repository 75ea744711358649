"""Label entries, vertex ordering, the label index and its binary format.

Inside a :class:`LabelIndex` an entry is the tuple
``(hub_rank, dist, count, canonical)``; label lists are kept sorted by hub
rank so two lists intersect with a single merge. Public accessors translate
ranks back to vertex ids through the frozen :class:`VertexOrdering`.
"""
from __future__ import annotations

import struct
from bisect import bisect_left
from dataclasses import dataclass
from typing import BinaryIO, NamedTuple

import numpy as np

from .graph import BipartiteGraph, DirectedGraph

U64_MAX = (1 << 64) - 1
INF = 1 << 62

HUB_BITS, DIST_BITS, COUNT_BITS = 23, 17, 24
HUB_LIMIT = 1 << HUB_BITS
DIST_SENTINEL = (1 << DIST_BITS) - 1
COUNT_MAX = (1 << COUNT_BITS) - 1

INDEX_MAGIC = b"CSC1"
INDEX_VERSION = 1
FLAG_BIPARTITE = 1
FLAG_COUNT_CLAMPED = 2


class IndexFormatError(ValueError):
    """Index file cannot be encoded or decoded."""


class LabelEntry(NamedTuple):
    hub: int
    dist: int
    count: int
    canonical: bool = True


@dataclass(frozen=True)
class QueryResult:
    """Shortest length (``None`` when unreachable) and number of shortest paths/cycles.

    Iterates as ``(length, count)``. ``saturated`` marks a count that hit
    the 64-bit ceiling.
    """

    length: int | None
    count: int
    saturated: bool = False

    def __iter__(self):
        yield self.length
        yield self.count

    @classmethod
    def none(cls):
        return cls(None, 0)

    @classmethod
    def of(cls, length, count):
        if length is None or length >= INF:
            return cls(None, 0)
        count = int(count)
        return cls(int(length), count, count >= U64_MAX)


def sat_add(a, b):
    s = a + b
    return U64_MAX if s > U64_MAX else s


def sat_mul(a, b):
    p = a * b
    return U64_MAX if p > U64_MAX else p


class VertexOrdering:
    """Total order over vertices; rank 0 is the highest."""

    def __init__(self, order):
        self.order = np.asarray(order, dtype=np.int64)
        n = len(self.order)
        self.rank = np.empty(n, dtype=np.int64)
        self.rank[self.order] = np.arange(n, dtype=np.int64)
        if n and not np.array_equal(np.sort(self.order), np.arange(n)):
            raise ValueError("ordering must be a permutation of 0..n-1")

    def __len__(self):
        return len(self.order)

    def __eq__(self, other):
        return isinstance(other, VertexOrdering) and np.array_equal(self.order, other.order)

    def precedes(self, v, w) -> bool:
        return self.rank[v] < self.rank[w]

    def bipartite(self) -> "VertexOrdering":
        """Couple-consecutive order over the split graph: ``v_in`` then ``v_out``."""
        order = np.empty(2 * len(self.order), dtype=np.int64)
        order[0::2] = 2 * self.order
        order[1::2] = 2 * self.order + 1
        return VertexOrdering(order)


def compute_ordering(g) -> VertexOrdering:
    """Descending total degree, ties by ascending id.

    For a :class:`BipartiteGraph` the underlying vertices are ranked the same
    way (in-degree of ``v_in`` plus out-degree of ``v_out``) and each couple
    takes two consecutive ranks.
    """
    if isinstance(g, BipartiteGraph):
        base = g.base
        deg = [base.in_degree(2 * v) + base.out_degree(2 * v + 1) for v in range(g.n_original)]
        order = sorted(range(g.n_original), key=lambda v: (-deg[v], v))
        return VertexOrdering(order).bipartite()
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    return VertexOrdering(order)


class PackedLabels(NamedTuple):
    """CSR view of both label sides, as consumed by :mod:`sccnt.kernels`."""

    out_off: np.ndarray
    out_hub: np.ndarray
    out_dist: np.ndarray
    out_cnt: np.ndarray
    out_flag: np.ndarray
    in_off: np.ndarray
    in_hub: np.ndarray
    in_dist: np.ndarray
    in_cnt: np.ndarray
    in_flag: np.ndarray

    def query_arrays(self):
        return (self.out_off, self.out_hub, self.out_dist, self.out_cnt,
                self.in_off, self.in_hub, self.in_dist, self.in_cnt)


def _unpack_side(off, hub, dist, cnt, flag):
    hub, dist, cnt, flag = hub.tolist(), dist.tolist(), cnt.tolist(), flag.tolist()
    rows = list(zip(hub, dist, cnt, (bool(f) for f in flag)))
    return [rows[off[v]:off[v + 1]] for v in range(len(off) - 1)]


def _pack_side(lists):
    n = len(lists)
    off = np.zeros(n + 1, dtype=np.int64)
    if n:
        np.cumsum([len(x) for x in lists], out=off[1:])
    flat = [e for lst in lists for e in lst]
    total = len(flat)
    hub = np.fromiter((e[0] for e in flat), dtype=np.int64, count=total)
    dist = np.fromiter((e[1] for e in flat), dtype=np.int64, count=total)
    cnt = np.fromiter((e[2] for e in flat), dtype=np.uint64, count=total)
    flag = np.fromiter((e[3] for e in flat), dtype=np.uint8, count=total)
    return off, hub, dist, cnt, flag


class LabelIndex:
    """Per-vertex in- and out-labels under a frozen vertex ordering.

    Built indexes start in packed (CSR array) form, which is what queries
    read. The first mutation materializes per-vertex Python lists plus the
    inverted hub indexes; packed arrays are regenerated lazily afterwards.
    """

    def __init__(self, ordering: VertexOrdering, bipartite: bool, packed: PackedLabels | None = None,
                 lin=None, lout=None):
        self.ordering = ordering
        self.bipartite = bipartite
        self.n = len(ordering)
        self.count_clamped = False
        self._packed = packed
        self._lin = lin
        self._lout = lout
        self._inv_in = None
        self._inv_out = None
        self.flags_stale = False

    # -- storage forms -----------------------------------------------------
    def packed(self) -> PackedLabels:
        if self._packed is None:
            self._packed = PackedLabels(*_pack_side(self._lout), *_pack_side(self._lin))
        return self._packed

    def _materialize(self):
        if self._lin is None:
            p = self._packed
            self._lin = _unpack_side(p.in_off, p.in_hub, p.in_dist, p.in_cnt, p.in_flag)
            self._lout = _unpack_side(p.out_off, p.out_hub, p.out_dist, p.out_cnt, p.out_flag)
        return self._lin, self._lout

    def lists(self):
        """Mutable ``(lin, lout)`` lists; drops the packed cache."""
        self._materialize()
        self._packed = None
        return self._lin, self._lout

    def _side_lists(self):
        if self._lin is not None:
            return self._lin, self._lout
        p = self._packed
        return (_unpack_side(p.in_off, p.in_hub, p.in_dist, p.in_cnt, p.in_flag),
                _unpack_side(p.out_off, p.out_hub, p.out_dist, p.out_cnt, p.out_flag))

    def inverted(self):
        """``(inv_in, inv_out)``: per hub vertex, the set of owners holding it."""
        lin, lout = self._materialize()
        if self._inv_in is None:
            order = self.ordering.order.tolist()
            self._inv_in = [set() for _ in range(self.n)]
            self._inv_out = [set() for _ in range(self.n)]
            for v, lst in enumerate(lin):
                for e in lst:
                    self._inv_in[order[e[0]]].add(v)
            for v, lst in enumerate(lout):
                for e in lst:
                    self._inv_out[order[e[0]]].add(v)
        return self._inv_in, self._inv_out

    def inv_in(self, hub) -> set:
        return self.inverted()[0][hub]

    def inv_out(self, hub) -> set:
        return self.inverted()[1][hub]

    # -- read access -------------------------------------------------------
    def _entries(self, v, side):
        if self._lin is not None:
            lst = (self._lin if side == "in" else self._lout)[v]
            return list(lst)
        p = self._packed
        if side == "in":
            off, hub, dist, cnt, flag = p.in_off, p.in_hub, p.in_dist, p.in_cnt, p.in_flag
        else:
            off, hub, dist, cnt, flag = p.out_off, p.out_hub, p.out_dist, p.out_cnt, p.out_flag
        a, b = off[v], off[v + 1]
        return list(zip(hub[a:b].tolist(), dist[a:b].tolist(), cnt[a:b].tolist(),
                        (bool(f) for f in flag[a:b])))

    def _public(self, entries):
        if self.flags_stale:
            self.refresh_canonical()
        order = self.ordering.order
        return [LabelEntry(int(order[h]), int(d), int(c), bool(f)) for h, d, c, f in entries]

    def in_label(self, v) -> list[LabelEntry]:
        return self._public(self._entries(v, "in"))

    def out_label(self, v) -> list[LabelEntry]:
        return self._public(self._entries(v, "out"))

    def num_entries(self) -> int:
        if self._lin is None:
            return int(self._packed.in_off[-1] + self._packed.out_off[-1])
        return sum(map(len, self._lin)) + sum(map(len, self._lout))

    def label_multiset(self, with_flags=False):
        """Sorted ``(side, owner, hub, dist, count[, canonical])`` rows, for comparisons."""
        if with_flags and self.flags_stale:
            self.refresh_canonical()
        lin, lout = self._side_lists()
        order = self.ordering.order
        rows = []
        for side, lists in (("in", lin), ("out", lout)):
            for v, lst in enumerate(lists):
                for h, d, c, f in lst:
                    row = (side, v, int(order[h]), d, c)
                    rows.append(row + (bool(f),) if with_flags else row)
        rows.sort()
        return rows

    # -- canonical flags ---------------------------------------------------
    def refresh_canonical(self):
        """Recompute canonical flags from the current labels.

        An entry is canonical when no strictly higher-ranked hub reaches the
        same pair at the same distance, i.e. it counts every shortest path.
        """
        lin, lout = self._lin, self._lout
        self.flags_stale = False
        if lin is None:
            return
        order = self.ordering.order
        for v, lst in enumerate(lin):
            for k, (h, d, c, _) in enumerate(lst):
                dh = dist_lists(lout[order[h]], lst, limit=h)
                lst[k] = (h, d, c, dh > d)
        for v, lst in enumerate(lout):
            for k, (h, d, c, _) in enumerate(lst):
                dh = dist_lists(lst, lin[order[h]], limit=h)
                lst[k] = (h, d, c, dh > d)
        self._packed = None


def dist_lists(a, b, limit=None):
    """Distance through common hubs of two rank-sorted entry lists.

    Only hubs ranked strictly above ``limit`` are considered when given.
    """
    i = j = 0
    la, lb = len(a), len(b)
    best = INF
    while i < la and j < lb:
        ha = a[i][0]
        hb = b[j][0]
        if limit is not None and (ha >= limit or hb >= limit):
            break
        if ha < hb:
            i += 1
        elif ha > hb:
            j += 1
        else:
            d = a[i][1] + b[j][1]
            if d < best:
                best = d
            i += 1
            j += 1
    return best


def spcnt_lists(a, b):
    i = j = 0
    la, lb = len(a), len(b)
    best = INF
    total = 0
    while i < la and j < lb:
        ha = a[i][0]
        hb = b[j][0]
        if ha < hb:
            i += 1
        elif ha > hb:
            j += 1
        else:
            d = a[i][1] + b[j][1]
            c = sat_mul(a[i][2], b[j][2])
            if d < best:
                best, total = d, c
            elif d == best:
                total = sat_add(total, c)
            i += 1
            j += 1
    return best, total


def find_entry(lst, hub_rank):
    """Position of ``hub_rank`` in a rank-sorted list, or ``-1``."""
    k = bisect_left(lst, (hub_rank,))
    if k < len(lst) and lst[k][0] == hub_rank:
        return k
    return -1


# -- 64-bit entry codec ----------------------------------------------------

def encode_entry(e) -> int:
    """Pack ``(hub, dist, count)`` as ``hub:23 | dist:17 | count:24``, high to low bits.

    Counts above ``COUNT_MAX`` are clamped; see :func:`is_clamped`.
    """
    hub, dist, count = int(e[0]), int(e[1]), int(e[2])
    if not 0 <= hub < HUB_LIMIT:
        raise IndexFormatError(f"hub id {hub} does not fit in {HUB_BITS} bits")
    if not 0 <= dist < DIST_SENTINEL:
        raise IndexFormatError(f"distance {dist} does not fit in {DIST_BITS} bits")
    if count < 1:
        raise IndexFormatError("stored counts must be positive")
    return (hub << (DIST_BITS + COUNT_BITS)) | (dist << COUNT_BITS) | min(count, COUNT_MAX)


def is_clamped(e) -> bool:
    return int(e[2]) > COUNT_MAX


def decode_entry(word: int) -> LabelEntry:
    word = int(word)
    return LabelEntry(word >> (DIST_BITS + COUNT_BITS),
                      (word >> COUNT_BITS) & DIST_SENTINEL,
                      word & COUNT_MAX)


def _encode_side(off, hub_ranks, dist, cnt, order):
    hubs = order[hub_ranks].astype(np.uint64)
    if len(hubs) and int(hubs.max()) >= HUB_LIMIT:
        raise IndexFormatError(f"graph too large: hub ids need more than {HUB_BITS} bits")
    if len(dist) and (int(dist.max()) >= DIST_SENTINEL or int(dist.min()) < 0):
        raise IndexFormatError(f"distance does not fit in {DIST_BITS} bits")
    clamped = bool(len(cnt) and int(cnt.max()) > COUNT_MAX)
    c = np.minimum(cnt, np.uint64(COUNT_MAX))
    words = (hubs << np.uint64(DIST_BITS + COUNT_BITS)) | (dist.astype(np.uint64) << np.uint64(COUNT_BITS)) | c
    return words, clamped


# Index layout, little-endian:
#   magic "CSC1" | u16 version | u16 flags | u64 n | u64 entries_in | u64 entries_out
#   u32[n] ordering (vertex at each rank, highest first)
#   u32[n] in-label sizes | u32[n] out-label sizes
#   u64[entries_in] in entries | u64[entries_out] out entries
#   canonical bitmaps (np.packbits, big bit order), in then out
_INDEX_HEADER = struct.Struct("<4sHHQQQ")


def save_index(idx: LabelIndex, fh: BinaryIO) -> None:
    if idx.flags_stale:
        idx.refresh_canonical()
    p = idx.packed()
    order = idx.ordering.order
    if idx.n >= HUB_LIMIT:
        raise IndexFormatError(f"graph too large: {idx.n} vertices exceed {HUB_BITS}-bit ids")
    in_words, c1 = _encode_side(p.in_off, p.in_hub, p.in_dist, p.in_cnt, order)
    out_words, c2 = _encode_side(p.out_off, p.out_hub, p.out_dist, p.out_cnt, order)
    clamped = c1 or c2 or idx.count_clamped
    flags = (FLAG_BIPARTITE if idx.bipartite else 0) | (FLAG_COUNT_CLAMPED if clamped else 0)
    fh.write(_INDEX_HEADER.pack(INDEX_MAGIC, INDEX_VERSION, flags, idx.n, len(in_words), len(out_words)))
    fh.write(order.astype("<u4").tobytes())
    fh.write(np.diff(p.in_off).astype("<u4").tobytes())
    fh.write(np.diff(p.out_off).astype("<u4").tobytes())
    fh.write(in_words.astype("<u8").tobytes())
    fh.write(out_words.astype("<u8").tobytes())
    fh.write(np.packbits(p.in_flag).tobytes())
    fh.write(np.packbits(p.out_flag).tobytes())


def _read(fh, size):
    data = fh.read(size)
    if len(data) != size:
        raise IndexFormatError("truncated index file")
    return data


def _decode_side(words, sizes, flags, rank):
    off = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=off[1:])
    hubs = (words >> np.uint64(DIST_BITS + COUNT_BITS)).astype(np.int64)
    if len(hubs) and int(hubs.max()) >= len(rank):
        raise IndexFormatError("hub id out of range")
    dist = ((words >> np.uint64(COUNT_BITS)) & np.uint64(DIST_SENTINEL)).astype(np.int64)
    cnt = (words & np.uint64(COUNT_MAX)).astype(np.uint64)
    return off, rank[hubs], dist, cnt, flags.astype(np.uint8)


def load_index(fh: BinaryIO) -> LabelIndex:
    magic, version, flags, n, n_in, n_out = _INDEX_HEADER.unpack(_read(fh, _INDEX_HEADER.size))
    if magic != INDEX_MAGIC:
        raise IndexFormatError(f"bad magic {magic!r}")
    if version != INDEX_VERSION:
        raise IndexFormatError(f"unsupported index version {version}")
    order = np.frombuffer(_read(fh, 4 * n), dtype="<u4").astype(np.int64)
    in_sizes = np.frombuffer(_read(fh, 4 * n), dtype="<u4").astype(np.int64)
    out_sizes = np.frombuffer(_read(fh, 4 * n), dtype="<u4").astype(np.int64)
    if in_sizes.sum() != n_in or out_sizes.sum() != n_out:
        raise IndexFormatError("label sizes disagree with header")
    in_words = np.frombuffer(_read(fh, 8 * n_in), dtype="<u8").astype(np.uint64)
    out_words = np.frombuffer(_read(fh, 8 * n_out), dtype="<u8").astype(np.uint64)
    in_flags = np.unpackbits(np.frombuffer(_read(fh, (n_in + 7) // 8), dtype=np.uint8), count=n_in)
    out_flags = np.unpackbits(np.frombuffer(_read(fh, (n_out + 7) // 8), dtype=np.uint8), count=n_out)
    if fh.read(1):
        raise IndexFormatError("trailing bytes after index")
    try:
        ordering = VertexOrdering(order)
    except ValueError as exc:
        raise IndexFormatError(str(exc)) from None
    rank = ordering.rank
    packed = PackedLabels(*_decode_side(out_words, out_sizes, out_flags, rank),
                          *_decode_side(in_words, in_sizes, in_flags, rank))
    idx = LabelIndex(ordering, bool(flags & FLAG_BIPARTITE), packed=packed)
    idx.count_clamped = bool(flags & FLAG_COUNT_CLAMPED)
    return idx


def save_index_file(idx, path):
    with open(path, "wb") as fh:
        save_index(idx, fh)


def load_index_file(path) -> LabelIndex:
    with open(path, "rb") as fh:
        return load_index(fh)


def check_graph_matches(idx: LabelIndex, g: DirectedGraph):
    expected = 2 * g.n if idx.bipartite else g.n
    if idx.n != expected:
        raise ValueError(f"index covers {idx.n} vertices but the graph implies {expected}")
