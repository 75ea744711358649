"""Brute-force ground truth for tests. Pure Python, shares no code with the index."""
from __future__ import annotations

from collections import deque

from .labels import QueryResult

_CAP = (1 << 64) - 1


def bfs_counts(g, s):
    """Distances and shortest-path counts from ``s`` (``None`` = unreachable)."""
    dist = [None] * g.n
    cnt = [0] * g.n
    dist[s] = 0
    cnt[s] = 1
    q = deque([s])
    while q:
        x = q.popleft()
        for y in g.out_adj[x]:
            if dist[y] is None:
                dist[y] = dist[x] + 1
                cnt[y] = cnt[x]
                q.append(y)
            elif dist[y] == dist[x] + 1:
                cnt[y] = min(cnt[y] + cnt[x], _CAP)
    return dist, cnt


def oracle_apsp(g):
    """``res[s][t] = (dist, count)``, with ``(None, 0)`` for unreachable pairs."""
    res = []
    for s in range(g.n):
        dist, cnt = bfs_counts(g, s)
        res.append([(d, c if d is not None else 0) for d, c in zip(dist, cnt)])
    return res


def top_ranked_counts(g, h, rank, forward=True):
    """``{x: (dist, count)}`` over shortest ``h -> x`` paths (``x -> h`` when not
    ``forward``) whose other vertices all rank below ``h``.

    A plain label entry ``(h, d, c)`` exists exactly when ``d`` is also the
    unrestricted distance.
    """
    adj = g.out_adj if forward else g.in_adj
    dist, cnt = {h: 0}, {h: 1}
    q = deque([h])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if rank[y] <= rank[h]:
                continue
            if y not in dist:
                dist[y] = dist[x] + 1
                cnt[y] = 0
                q.append(y)
            if dist[y] == dist[x] + 1:
                cnt[y] = min(cnt[y] + cnt[x], _CAP)
    return {x: (dist[x], cnt[x]) for x in dist}


def oracle_sccnt(g, v, min_len=3, apsp=None) -> QueryResult:
    """Shortest cycles through ``v`` with at least ``min_len`` edges.

    For each out-neighbor ``w`` the shortest ``w -> v`` walk of at least
    ``min_len - 1`` edges is needed; when ``w -> v`` is itself an edge and
    2-cycles are excluded, the search from ``w`` skips that edge.
    """
    best, total = None, 0
    for w in g.out_adj[v]:
        if min_len >= 3 and g.has_edge(w, v):
            d, c = _counts_without(g, w, v)
        elif apsp is not None:
            d, c = apsp[w][v]
        else:
            dist, cnt = bfs_counts(g, w)
            d, c = dist[v], cnt[v]
        if d is None:
            continue
        length = d + 1
        if best is None or length < best:
            best, total = length, c
        elif length == best:
            total = min(total + c, _CAP)
    return QueryResult(best, total, total >= _CAP) if best is not None else QueryResult(None, 0)


def _counts_without(g, w, v):
    dist = {w: 0}
    cnt = {w: 1}
    q = deque([w])
    while q:
        x = q.popleft()
        if x == v:
            return dist[x], cnt[x]
        for y in g.out_adj[x]:
            if x == w and y == v:
                continue
            if y not in dist:
                dist[y] = dist[x] + 1
                cnt[y] = cnt[x]
                q.append(y)
            elif dist[y] == dist[x] + 1:
                cnt[y] = min(cnt[y] + cnt[x], _CAP)
    return None, 0


def enumerate_sccnt(g, v, min_len=3) -> QueryResult:
    """Exhaustive DFS over simple cycles through ``v``; only for tiny graphs.

    Iterative deepening on the cycle length, so the first length with any
    cycle is the answer.
    """
    for length in range(min_len, g.n + 1):
        found = _count_cycles(g, v, length)
        if found:
            return QueryResult(length, found)
    return QueryResult(None, 0)


def _count_cycles(g, v, length):
    count = 0
    on_path = {v}

    def dfs(x, depth):
        nonlocal count
        for y in g.out_adj[x]:
            if y == v:
                if depth + 1 == length:
                    count += 1
            elif y not in on_path and depth + 1 < length:
                on_path.add(y)
                dfs(y, depth + 1)
                on_path.discard(y)

    dfs(v, 0)
    return count
