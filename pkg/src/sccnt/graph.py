"""Dynamic directed graph storage and the in/out vertex-splitting conversion."""
from __future__ import annotations

import io
import json
import logging
import struct
from bisect import bisect_left, insort
from pathlib import Path
from typing import BinaryIO, Iterable

import numpy as np

log = logging.getLogger(__name__)

IN, OUT = 0, 1

GRAPH_MAGIC = b"CSG1"
GRAPH_VERSION = 1


class EdgeListError(ValueError):
    """Malformed edge-list input."""


class GraphFormatError(ValueError):
    """Bad or truncated binary graph snapshot."""


class DirectedGraph:
    """Simple directed graph over dense ids ``0..n-1``.

    Out- and in-neighbor lists are kept sorted so membership tests are
    logarithmic and every serialization is deterministic. Self-loops and
    parallel edges are never stored.

    ``labels`` maps dense ids back to the identifiers used in the source
    file; it defaults to ``str(i)``.
    """

    def __init__(self, n: int = 0, edges: Iterable[tuple[int, int]] = (), labels=None):
        self.n = int(n)
        self.out_adj: list[list[int]] = [[] for _ in range(self.n)]
        self.in_adj: list[list[int]] = [[] for _ in range(self.n)]
        self.m = 0
        self.labels: list[str] = list(labels) if labels is not None else [str(i) for i in range(self.n)]
        if len(self.labels) != self.n:
            raise ValueError("labels must have one entry per vertex")
        self._index = None
        self._csr = None
        self.dropped = {"self_loops": 0, "duplicates": 0}
        for a, b in edges:
            if a == b:
                self.dropped["self_loops"] += 1
            elif not self.insert_edge(a, b):
                self.dropped["duplicates"] += 1

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, m={self.m})"

    def _check(self, a, b):
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise IndexError(f"edge ({a}, {b}) out of range for n={self.n}")
        if a == b:
            raise ValueError(f"self-loop ({a}, {a}) rejected")

    def has_edge(self, a: int, b: int) -> bool:
        adj = self.out_adj[a]
        i = bisect_left(adj, b)
        return i < len(adj) and adj[i] == b

    def insert_edge(self, a: int, b: int) -> bool:
        self._check(a, b)
        if self.has_edge(a, b):
            return False
        insort(self.out_adj[a], b)
        insort(self.in_adj[b], a)
        self.m += 1
        self._csr = None
        return True

    def delete_edge(self, a: int, b: int) -> bool:
        self._check(a, b)
        adj = self.out_adj[a]
        i = bisect_left(adj, b)
        if i == len(adj) or adj[i] != b:
            return False
        del adj[i]
        radj = self.in_adj[b]
        del radj[bisect_left(radj, a)]
        self.m -= 1
        self._csr = None
        return True

    def edges(self):
        for a, nbrs in enumerate(self.out_adj):
            for b in nbrs:
                yield a, b

    def out_degree(self, v):
        return len(self.out_adj[v])

    def in_degree(self, v):
        return len(self.in_adj[v])

    def degree(self, v):
        return len(self.out_adj[v]) + len(self.in_adj[v])

    def min_in_out_degree(self, v):
        return min(len(self.out_adj[v]), len(self.in_adj[v]))

    def reversed(self) -> "DirectedGraph":
        return DirectedGraph(self.n, ((b, a) for a, b in self.edges()), self.labels)

    def copy(self) -> "DirectedGraph":
        g = DirectedGraph(self.n, labels=self.labels)
        g.out_adj = [list(x) for x in self.out_adj]
        g.in_adj = [list(x) for x in self.in_adj]
        g.m = self.m
        return g

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n == other.n and self.out_adj == other.out_adj

    def vertex_id(self, label) -> int:
        """Dense id of an original vertex identifier."""
        if self._index is None:
            self._index = {s: i for i, s in enumerate(self.labels)}
        key = str(label)
        if key not in self._index:
            raise KeyError(f"unknown vertex {label!r}")
        return self._index[key]

    def csr(self):
        """``(out_off, out_nbr, in_off, in_nbr)`` int64 arrays, cached until mutated."""
        if self._csr is None:
            self._csr = _to_csr(self.out_adj) + _to_csr(self.in_adj)
        return self._csr


def _to_csr(adj):
    off = np.zeros(len(adj) + 1, dtype=np.int64)
    if adj:
        np.cumsum([len(a) for a in adj], out=off[1:])
    nbr = np.fromiter((x for a in adj for x in a), dtype=np.int64, count=int(off[-1]))
    return off, nbr


def _sort_key(tokens):
    try:
        nums = [int(t) for t in tokens]
    except ValueError:
        return sorted(tokens)
    return [t for _, t in sorted(zip(nums, tokens))]


def parse_edge_list(lines: Iterable[str]) -> DirectedGraph:
    pairs = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"line {lineno}: expected 'u v', got {raw.rstrip()!r}")
        pairs.append((parts[0], parts[1]))
    tokens = {t for p in pairs for t in p}
    # numeric ids keep their natural order, so degree ties break by original id
    labels = _sort_key(list(tokens))
    index = {t: i for i, t in enumerate(labels)}
    g = DirectedGraph(len(labels), ((index[a], index[b]) for a, b in pairs), labels)
    if g.dropped["self_loops"] or g.dropped["duplicates"]:
        log.warning(
            "dropped %d self-loop(s) and %d duplicate edge(s)",
            g.dropped["self_loops"], g.dropped["duplicates"],
        )
    return g


def load_edge_list(source) -> DirectedGraph:
    """Read a whitespace-separated ``u v`` edge list.

    ``source`` may be a path, a text/byte stream, or raw bytes.
    """
    if isinstance(source, (bytes, bytearray)):
        return parse_edge_list(io.StringIO(source.decode()))
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return parse_edge_list(fh)
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode()
    return parse_edge_list(io.StringIO(data))


def write_edge_list(g: DirectedGraph, fh) -> None:
    for a, b in g.edges():
        fh.write(f"{g.labels[a]} {g.labels[b]}\n")


# Snapshot layout, little-endian:
#   magic "CSG1" | u16 version | u16 reserved | u64 n | u64 m
#   u64[n+1] out offsets | u32[m] out targets
#   u64 label-bytes length | UTF-8 JSON array of original vertex labels
_GRAPH_HEADER = struct.Struct("<4sHHQQ")


def save_graph(g: DirectedGraph, fh: BinaryIO) -> None:
    off, nbr, _, _ = g.csr()
    fh.write(_GRAPH_HEADER.pack(GRAPH_MAGIC, GRAPH_VERSION, 0, g.n, g.m))
    fh.write(off.astype("<u8").tobytes())
    fh.write(nbr.astype("<u4").tobytes())
    blob = json.dumps(g.labels, separators=(",", ":")).encode()
    fh.write(struct.pack("<Q", len(blob)))
    fh.write(blob)


def _read_exact(fh, size):
    data = fh.read(size)
    if len(data) != size:
        raise GraphFormatError("truncated graph snapshot")
    return data


def load_graph(fh: BinaryIO) -> DirectedGraph:
    magic, version, _, n, m = _GRAPH_HEADER.unpack(_read_exact(fh, _GRAPH_HEADER.size))
    if magic != GRAPH_MAGIC:
        raise GraphFormatError(f"bad magic {magic!r}")
    if version != GRAPH_VERSION:
        raise GraphFormatError(f"unsupported graph snapshot version {version}")
    off = np.frombuffer(_read_exact(fh, 8 * (n + 1)), dtype="<u8").astype(np.int64)
    nbr = np.frombuffer(_read_exact(fh, 4 * m), dtype="<u4").astype(np.int64)
    (size,) = struct.unpack("<Q", _read_exact(fh, 8))
    labels = json.loads(_read_exact(fh, size).decode())
    if off[-1] != m or len(labels) != n:
        raise GraphFormatError("inconsistent graph snapshot")
    g = DirectedGraph(n, labels=labels)
    for a in range(n):
        for b in nbr[off[a]:off[a + 1]]:
            g.insert_edge(a, int(b))
    return g


def read_graph(path) -> DirectedGraph:
    """Load either a binary snapshot or a text edge list, by magic bytes."""
    with open(path, "rb") as fh:
        head = fh.read(4)
        fh.seek(0)
        if head == GRAPH_MAGIC:
            return load_graph(fh)
        return load_edge_list(fh)


class BipartiteGraph:
    """Vertex-split form of a directed graph.

    Original vertex ``v`` becomes the pair ``(2v, 2v+1)``: the incoming half
    ``v_in = 2v`` keeps every in-edge and the outgoing half ``v_out = 2v+1``
    keeps every out-edge, joined by the couple edge ``v_in -> v_out``. An
    original edge ``v -> w`` becomes ``v_out -> w_in``. A shortest cycle
    through ``v`` of length ``k`` is a shortest ``v_out -> v_in`` path of
    length ``2k - 1``.
    """

    def __init__(self, base: DirectedGraph, n_original: int):
        self.base = base
        self.n_original = n_original

    @property
    def n(self):
        return self.base.n

    @property
    def m(self):
        return self.base.m

    @staticmethod
    def vin(v: int) -> int:
        return 2 * v

    @staticmethod
    def vout(v: int) -> int:
        return 2 * v + 1

    @staticmethod
    def couple(x: int) -> int:
        return x ^ 1

    @staticmethod
    def side(x: int) -> int:
        return x & 1

    @staticmethod
    def original(x: int) -> int:
        return x >> 1

    def insert_original_edge(self, v: int, w: int) -> bool:
        return self.base.insert_edge(2 * v + 1, 2 * w)

    def delete_original_edge(self, v: int, w: int) -> bool:
        return self.base.delete_edge(2 * v + 1, 2 * w)


def bipartite_convert(g: DirectedGraph) -> BipartiteGraph:
    labels = []
    for s in g.labels:
        labels += [f"{s}^i", f"{s}^o"]
    edges = [(2 * v, 2 * v + 1) for v in range(g.n)]
    edges += [(2 * v + 1, 2 * w) for v, w in g.edges()]
    return BipartiteGraph(DirectedGraph(2 * g.n, edges, labels), g.n)
