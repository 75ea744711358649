"""Array kernels for index construction and query evaluation.

Everything here takes flat numpy arrays (CSR adjacency, packed labels) and
is compiled with numba unless ``SCCNT_NUMBA=0``. Path counts are uint64 and
saturate at ``2**64 - 1``.

Packed labels use one CSR block per side: ``off[v]:off[v+1]`` slices the
parallel arrays ``hub`` (hub *rank*, ascending), ``dist``, ``cnt`` and
``flag`` (1 for canonical entries).
"""
import numpy as np

from ._jit import jit

INF = np.int64(1) << np.int64(62)
U64_MAX = np.uint64(0xFFFFFFFFFFFFFFFF)


@jit
def sat_add(a, b):
    if a > U64_MAX - b:
        return U64_MAX
    return a + b


@jit
def sat_mul(a, b):
    if a == 0 or b == 0:
        return np.uint64(0)
    if a > U64_MAX // b:
        return U64_MAX
    return a * b


@jit
def spcnt_packed(o_off, o_hub, o_dist, o_cnt, i_off, i_hub, i_dist, i_cnt, s, t):
    """Merge-intersect ``L_out(s)`` and ``L_in(t)``: ``(dist, count)``, INF if no common hub."""
    i = o_off[s]
    iend = o_off[s + 1]
    j = i_off[t]
    jend = i_off[t + 1]
    best = INF
    total = np.uint64(0)
    while i < iend and j < jend:
        hi = o_hub[i]
        hj = i_hub[j]
        if hi < hj:
            i += 1
        elif hi > hj:
            j += 1
        else:
            d = o_dist[i] + i_dist[j]
            if d < best:
                best = d
                total = sat_mul(o_cnt[i], i_cnt[j])
            elif d == best:
                total = sat_add(total, sat_mul(o_cnt[i], i_cnt[j]))
            i += 1
            j += 1
    return best, total


@jit
def sccnt_neighbors_packed(o_off, o_hub, o_dist, o_cnt, i_off, i_hub, i_dist, i_cnt,
                           nbrs, v, forward):
    """Shortest ``v``-cycles by querying every neighbor in ``nbrs``.

    ``forward`` selects out-neighbors (query ``w -> v``); otherwise ``nbrs``
    holds in-neighbors and the query is ``v -> w``. Returns cycle length
    (INF if none) and count.
    """
    best = INF
    total = np.uint64(0)
    for k in range(nbrs.shape[0]):
        w = nbrs[k]
        if forward:
            d, c = spcnt_packed(o_off, o_hub, o_dist, o_cnt, i_off, i_hub, i_dist, i_cnt, w, v)
        else:
            d, c = spcnt_packed(o_off, o_hub, o_dist, o_cnt, i_off, i_hub, i_dist, i_cnt, v, w)
        if d < best:
            best = d
            total = c
        elif d == best and d < INF:
            total = sat_add(total, c)
    if best == INF:
        return INF, np.uint64(0)
    return best + 1, total


@jit
def bfs_count(off, nbr, sources, target, ban_src, ban_dst):
    """Multi-source BFS path counting towards ``target``.

    Every vertex in ``sources`` starts at distance 1 with one path, which is
    how a cycle search from ``v`` seeds its out-neighbors. The edge
    ``ban_src -> ban_dst`` is ignored (pass -1 to disable). Returns the
    distance at which ``target`` is dequeued and its path count, or
    ``(INF, 0)``.
    """
    n = off.shape[0] - 1
    D = np.full(n, INF, dtype=np.int64)
    C = np.zeros(n, dtype=np.uint64)
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    for k in range(sources.shape[0]):
        s = sources[k]
        if D[s] == INF:
            D[s] = 1
            C[s] = np.uint64(1)
            queue[tail] = s
            tail += 1
    while head < tail:
        w = queue[head]
        head += 1
        if w == target:
            return D[w], C[w]
        nd = D[w] + 1
        for k in range(off[w], off[w + 1]):
            u = nbr[k]
            if w == ban_src and u == ban_dst:
                continue
            if D[u] == INF:
                D[u] = nd
                C[u] = C[w]
                queue[tail] = u
                tail += 1
            elif D[u] == nd:
                C[u] = sat_add(C[u], C[w])
    return INF, np.uint64(0)


@jit
def _push(hubs, dists, cnts, flags, lens, v, h, d, c, f):
    k = lens[v]
    if k == hubs[v].shape[0]:
        cap = 2 * k
        nh = np.empty(cap, dtype=np.int64)
        nd = np.empty(cap, dtype=np.int64)
        nc = np.empty(cap, dtype=np.uint64)
        nf = np.empty(cap, dtype=np.uint8)
        nh[:k] = hubs[v][:k]
        nd[:k] = dists[v][:k]
        nc[:k] = cnts[v][:k]
        nf[:k] = flags[v][:k]
        hubs[v] = nh
        dists[v] = nd
        cnts[v] = nc
        flags[v] = nf
    hubs[v][k] = h
    dists[v][k] = d
    cnts[v][k] = c
    flags[v][k] = f
    lens[v] = k + 1


@jit
def _flatten(hubs, dists, cnts, flags, lens):
    n = lens.shape[0]
    off = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        off[v + 1] = off[v] + lens[v]
    total = off[n]
    h = np.empty(total, dtype=np.int64)
    d = np.empty(total, dtype=np.int64)
    c = np.empty(total, dtype=np.uint64)
    f = np.empty(total, dtype=np.uint8)
    for v in range(n):
        a = off[v]
        k = lens[v]
        h[a:a + k] = hubs[v][:k]
        d[a:a + k] = dists[v][:k]
        c[a:a + k] = cnts[v][:k]
        f[a:a + k] = flags[v][:k]
    return off, h, d, c, f


@jit
def _label_dist(T, hubs, dists, flags, k, canonical_only):
    best = INF
    for j in range(k):
        if canonical_only and flags[j] == 0:
            continue
        t = T[hubs[j]]
        if t < INF:
            d = t + dists[j]
            if d < best:
                best = d
    return best


@jit
def build_labels(out_off, out_nbr, in_off, in_nbr, rank, order, bipartite, canonical_only):
    """Pruned-BFS hub labeling with per-hub path counting.

    Hubs are processed in rank order; each runs a forward BFS writing
    in-labels and a backward BFS writing out-labels. A vertex ``w`` is
    labelled when no strictly higher hub already gives a shorter distance;
    an equal distance yields a non-canonical entry and the search goes on.

    With ``bipartite`` set the graph must be the vertex-split form (ids
    ``2v``/``2v+1``, couples ranked consecutively) and couple skipping is
    applied: outgoing halves only get self entries as hubs, and each label
    written for one half is mirrored to its couple at distance +1.
    """
    n = rank.shape[0]
    in_h = [np.empty(4, dtype=np.int64) for _ in range(n)]
    in_d = [np.empty(4, dtype=np.int64) for _ in range(n)]
    in_c = [np.empty(4, dtype=np.uint64) for _ in range(n)]
    in_f = [np.empty(4, dtype=np.uint8) for _ in range(n)]
    in_len = np.zeros(n, dtype=np.int64)
    out_h = [np.empty(4, dtype=np.int64) for _ in range(n)]
    out_d = [np.empty(4, dtype=np.int64) for _ in range(n)]
    out_c = [np.empty(4, dtype=np.uint64) for _ in range(n)]
    out_f = [np.empty(4, dtype=np.uint8) for _ in range(n)]
    out_len = np.zeros(n, dtype=np.int64)

    D = np.full(n, INF, dtype=np.int64)
    C = np.zeros(n, dtype=np.uint64)
    T = np.full(n, INF, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    seen = np.empty(n, dtype=np.int64)
    one = np.uint64(1)

    for r in range(n):
        v = order[r]
        if bipartite and (v & 1) == 1:
            _push(in_h, in_d, in_c, in_f, in_len, v, r, 0, one, 1)
            _push(out_h, out_d, out_c, out_f, out_len, v, r, 0, one, 1)
            continue

        # forward search: in-labels with hub v
        for j in range(out_len[v]):
            if canonical_only and out_f[v][j] == 0:
                continue
            T[out_h[v][j]] = out_d[v][j]
        head = 0
        tail = 1
        queue[0] = v
        nseen = 1
        seen[0] = v
        D[v] = 0
        C[v] = one
        while head < tail:
            w = queue[head]
            head += 1
            d = _label_dist(T, in_h[w], in_d[w], in_f[w], in_len[w], canonical_only)
            if d < D[w]:
                continue
            canon = 1 if d > D[w] else 0
            _push(in_h, in_d, in_c, in_f, in_len, w, r, D[w], C[w], canon)
            src = w
            if bipartite:
                src = w ^ 1
                D[src] = D[w] + 1
                C[src] = C[w]
                seen[nseen] = src
                nseen += 1
                _push(in_h, in_d, in_c, in_f, in_len, src, r, D[src], C[src], canon)
            nd = D[src] + 1
            for k in range(out_off[src], out_off[src + 1]):
                u = out_nbr[k]
                if D[u] == INF:
                    if rank[u] > r:
                        D[u] = nd
                        C[u] = C[src]
                        queue[tail] = u
                        tail += 1
                        seen[nseen] = u
                        nseen += 1
                elif D[u] == nd:
                    C[u] = sat_add(C[u], C[src])
        for j in range(nseen):
            D[seen[j]] = INF
            C[seen[j]] = 0
        for j in range(out_len[v]):
            T[out_h[v][j]] = INF

        # backward search: out-labels with hub v
        for j in range(in_len[v]):
            if in_h[v][j] >= r:
                continue
            if canonical_only and in_f[v][j] == 0:
                continue
            T[in_h[v][j]] = in_d[v][j]
        head = 0
        tail = 1
        queue[0] = v
        nseen = 1
        seen[0] = v
        D[v] = 0
        C[v] = one
        while head < tail:
            w = queue[head]
            head += 1
            src = w
            if w == v:
                _push(out_h, out_d, out_c, out_f, out_len, v, r, 0, one, 1)
            else:
                d = _label_dist(T, out_h[w], out_d[w], out_f[w], out_len[w], canonical_only)
                if d < D[w]:
                    continue
                canon = 1 if d > D[w] else 0
                _push(out_h, out_d, out_c, out_f, out_len, w, r, D[w], C[w], canon)
                if bipartite:
                    if w == (v ^ 1):
                        continue
                    src = w ^ 1
                    D[src] = D[w] + 1
                    C[src] = C[w]
                    seen[nseen] = src
                    nseen += 1
                    _push(out_h, out_d, out_c, out_f, out_len, src, r, D[src], C[src], canon)
            nd = D[src] + 1
            for k in range(in_off[src], in_off[src + 1]):
                u = in_nbr[k]
                if D[u] == INF:
                    if rank[u] > r:
                        D[u] = nd
                        C[u] = C[src]
                        queue[tail] = u
                        tail += 1
                        seen[nseen] = u
                        nseen += 1
                elif D[u] == nd:
                    C[u] = sat_add(C[u], C[src])
        for j in range(nseen):
            D[seen[j]] = INF
            C[seen[j]] = 0
        for j in range(in_len[v]):
            T[in_h[v][j]] = INF

    ins = _flatten(in_h, in_d, in_c, in_f, in_len)
    outs = _flatten(out_h, out_d, out_c, out_f, out_len)
    return ins, outs
