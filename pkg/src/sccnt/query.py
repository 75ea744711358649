"""SPCnt and SCCnt evaluation over label indexes, plus the graph-search baseline.

Cycle semantics: by default a cycle needs at least three edges, so a
back-and-forth pair ``v -> w -> v`` does not count. Every SCCnt entry point
takes ``min_cycle_len`` (2 or 3). When the unrestricted shortest cycle has
length 2 and 2-cycles are excluded, the answer is recomputed per
out-neighbor ``w``: a plain ``w -> v`` path query when the edge ``w -> v`` is
absent, otherwise a search from ``w`` that ignores that edge.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .graph import BipartiteGraph, DirectedGraph
from .labels import INF, LabelIndex, QueryResult, sat_add


class Probe:
    """Access counters for query-locality checks.

    Activate with ``with PROBE.recording():``; counters are cleared on entry.
    """

    def __init__(self):
        self.active = False
        self.reset()

    def reset(self):
        self.label_reads = 0
        self.adjacency_reads = 0
        self.spcnt_calls = 0

    def recording(self):
        probe = self

        class _Ctx:
            def __enter__(self):
                probe.reset()
                probe.active = True
                return probe

            def __exit__(self, *exc):
                probe.active = False

        return _Ctx()


PROBE = Probe()


def _check_min_len(min_cycle_len):
    if min_cycle_len not in (2, 3):
        raise ValueError("min_cycle_len must be 2 or 3")


def _raw(idx: LabelIndex, s, t):
    if PROBE.active:
        PROBE.label_reads += 2
        PROBE.spcnt_calls += 1
    return kernels.spcnt_packed(*idx.packed().query_arrays(), s, t)


def spcnt(idx: LabelIndex, s: int, t: int) -> QueryResult:
    """Shortest distance and path count from ``s`` to ``t`` over indexed ids."""
    if not (0 <= s < idx.n and 0 <= t < idx.n):
        raise IndexError(f"vertex out of range for n={idx.n}")
    d, c = _raw(idx, s, t)
    return QueryResult.of(d, c)


def split_spcnt(idx: LabelIndex, x: int, y: int) -> QueryResult:
    """SPCnt between two split-graph vertices of a bipartite index.

    Couple skipping leaves no label for paths whose top-ranked vertex is
    the source ``x`` itself when ``x`` is an outgoing half. Such sources
    are routed through their couple, the only in-neighbor of ``x``.
    """
    if not idx.bipartite:
        raise ValueError("split_spcnt needs a bipartite index")
    if x & 1 and y != x and y != x ^ 1:
        d, c = _raw(idx, x ^ 1, y)
        return QueryResult.of(d - 1, c) if d < INF else QueryResult.none()
    return QueryResult.of(*_raw(idx, x, y))


def csc_spcnt(idx: LabelIndex, u: int, w: int) -> QueryResult:
    """SPCnt between original vertices ``u`` and ``w`` on a bipartite index.

    Evaluated as ``u_in -> w_in`` (length ``2*sd``): with couple skipping no
    label covers paths whose top-ranked vertex is ``u_out``, while every
    ``u_in``-rooted path keeps a ``V_in`` vertex on top.
    """
    if not idx.bipartite:
        raise ValueError("csc_spcnt needs a bipartite index")
    if u == w:
        return QueryResult(0, 1)
    d, c = _raw(idx, 2 * u, 2 * w)
    if d >= INF:
        return QueryResult.none()
    return QueryResult.of(d // 2, c)


def _combine(best, total, d, c):
    if d < best:
        return d, c
    if d == best and d < INF:
        return best, sat_add(total, c)
    return best, total


def _no_two_cycles(v, out_nbrs, partner, path_len, search_len):
    """Shortest cycles through ``v`` of length >= 3.

    ``path_len(w)`` gives ``(len, count)`` of shortest ``w -> v`` paths;
    ``search_len(w)`` the same with the edge ``w -> v`` ignored.
    """
    best, total = INF, 0
    for w in out_nbrs:
        d, c = search_len(w) if partner(w) else path_len(w)
        if d < INF:
            best, total = _combine(best, total, d + 1, int(c))
    return QueryResult.of(best, total)


def _bfs_banned(g: DirectedGraph, w, v):
    out_off, out_nbr, _, _ = g.csr()
    d, c = kernels.bfs_count(out_off, out_nbr, np.array([w], dtype=np.int64), v, w, v)
    # sources sit at distance 1
    return (d - 1, c) if d < INF else (INF, 0)


def sccnt_csc(idx: LabelIndex, v: int, gb: BipartiteGraph | None = None, min_cycle_len=3) -> QueryResult:
    """Shortest cycles through original vertex ``v`` from ``L_out(v_out)`` and ``L_in(v_in)``.

    ``gb`` is only consulted when a 2-cycle has to be excluded.
    """
    _check_min_len(min_cycle_len)
    if not idx.bipartite:
        raise ValueError("sccnt_csc needs a bipartite index")
    d, c = _raw(idx, 2 * v + 1, 2 * v)
    if d >= INF:
        return QueryResult.none()
    length = (int(d) + 1) // 2
    if length >= min_cycle_len:
        return QueryResult.of(length, c)
    if gb is None:
        raise ValueError("excluding a 2-cycle needs the bipartite graph")
    base = gb.base
    if PROBE.active:
        PROBE.adjacency_reads += 1

    def path_len(w):
        r = csc_spcnt(idx, w, v)
        return (INF, 0) if r.length is None else (r.length, r.count)

    def search_len(w):
        out_off, out_nbr, _, _ = base.csr()
        bd, bc = kernels.bfs_count(out_off, out_nbr, np.array([2 * w + 1], dtype=np.int64),
                                   2 * v, 2 * w + 1, 2 * v)
        # a k-edge original path is 2k-1 split edges; sources start at 1
        return (bd // 2, bc) if bd < INF else (INF, 0)

    out_nbrs = [x >> 1 for x in base.out_adj[2 * v + 1]]
    return _no_two_cycles(v, out_nbrs, lambda w: base.has_edge(2 * w + 1, 2 * v), path_len, search_len)


def sccnt_hpspc(idx: LabelIndex, g: DirectedGraph, v: int, min_cycle_len=3) -> QueryResult:
    """Shortest cycles through ``v`` via one SPCnt per neighbor on the smaller side."""
    _check_min_len(min_cycle_len)
    if idx.bipartite:
        raise ValueError("sccnt_hpspc needs a plain index")
    out_off, out_nbr, in_off, in_nbr = g.csr()
    forward = out_off[v + 1] - out_off[v] < in_off[v + 1] - in_off[v]
    nbrs = out_nbr[out_off[v]:out_off[v + 1]] if forward else in_nbr[in_off[v]:in_off[v + 1]]
    if PROBE.active:
        PROBE.adjacency_reads += 1
        PROBE.spcnt_calls += len(nbrs)
        PROBE.label_reads += 2 * len(nbrs)
    d, c = kernels.sccnt_neighbors_packed(*idx.packed().query_arrays(), nbrs, v, forward)
    if d >= INF:
        return QueryResult.none()
    if d >= min_cycle_len:
        return QueryResult.of(d, c)

    def path_len(w):
        return _raw(idx, w, v)

    return _no_two_cycles(v, g.out_adj[v], lambda w: g.has_edge(w, v), path_len,
                          lambda w: _bfs_banned(g, w, v))


def sccnt_bfs(g: DirectedGraph, v: int, min_cycle_len=3) -> QueryResult:
    """Index-free baseline: BFS from the out-neighbors of ``v`` back to ``v``."""
    _check_min_len(min_cycle_len)
    out_off, out_nbr, _, _ = g.csr()
    sources = out_nbr[out_off[v]:out_off[v + 1]]
    d, c = kernels.bfs_count(out_off, out_nbr, sources, v, -1, -1)
    if d >= INF:
        return QueryResult.none()
    if d >= min_cycle_len:
        return QueryResult.of(d, c)
    # one multi-source search over non-partners, one banned-edge search per partner
    partners = [w for w in g.out_adj[v] if g.has_edge(w, v)]
    others = np.array([w for w in g.out_adj[v] if not g.has_edge(w, v)], dtype=np.int64)
    best, total = INF, 0
    if len(others):
        od, oc = kernels.bfs_count(out_off, out_nbr, others, v, -1, -1)
        best, total = _combine(best, total, od, int(oc))
    for w in partners:
        pd, pc = _bfs_banned(g, w, v)
        if pd < INF:
            best, total = _combine(best, total, pd + 1, int(pc))
    return QueryResult.of(best, total)
