"""In-place index maintenance under single-edge insertions and deletions.

Both operations act on the indexed graph: for a bipartite index the edge is
``(v_out, w_in)``; :class:`CycleIndex` does that translation for original
edges. The graph must already reflect the update when ``inc_cnt`` or
``dec_cnt`` is called.

Insertion resumes a pruned search from the new edge for every hub of
``L_in(a)`` (forward from ``b``) and of ``L_out(b)`` (backward from ``a``),
highest rank first. With the REDUNDANCY strategy entries that lost their
shortest distance are left behind; they never win a query. MINIMALITY
removes them as soon as a label changes.

Deletion collects every vertex whose shortest paths to ``b`` (from ``a``)
may run through the edge, drops the label entries that pair such vertices,
then regenerates exactly those pairs with build-style searches.
"""
from __future__ import annotations

import enum
import time
from bisect import bisect_left
from collections import deque
from dataclasses import asdict, dataclass

from .build import build
from .graph import BipartiteGraph, DirectedGraph, bipartite_convert
from .labels import INF, U64_MAX, LabelIndex, dist_lists, find_entry, spcnt_lists
from .query import csc_spcnt, sccnt_csc, sccnt_hpspc, spcnt

IN, OUT = "in", "out"

INSERTED, REPLACED, ACCUMULATED, UNCHANGED = "inserted", "replaced", "accumulated", "unchanged"


class Strategy(enum.Enum):
    REDUNDANCY = "redundancy"
    MINIMALITY = "minimality"


@dataclass
class UpdateConfig:
    strategy: Strategy = Strategy.REDUNDANCY
    min_cycle_len: int = 3
    # diagnostics only: "ascending" hub order and "spcnt" seeding exist to exercise failure modes
    hub_order: str = "descending"
    seed_count: str = "label"

    def __post_init__(self):
        if isinstance(self.strategy, str):
            self.strategy = Strategy(self.strategy)
        if self.min_cycle_len not in (2, 3):
            raise ValueError("min_cycle_len must be 2 or 3")
        if self.hub_order not in ("descending", "ascending"):
            raise ValueError("hub_order must be 'descending' or 'ascending'")
        if self.seed_count not in ("label", "spcnt"):
            raise ValueError("seed_count must be 'label' or 'spcnt'")


@dataclass
class UpdateStats:
    inserted: int = 0
    replaced: int = 0
    accumulated: int = 0
    deleted: int = 0
    visited: int = 0
    hubs: int = 0
    seconds: float = 0.0

    @property
    def touched(self):
        return self.inserted + self.replaced + self.accumulated + self.deleted

    def as_dict(self):
        return asdict(self)


def update_label(entry, lst):
    """Merge ``(hub_rank, dist, count)`` into a rank-sorted label list.

    Shorter distance replaces, equal distance adds counts, an absent hub is
    inserted in rank order. Returns which of those happened.
    """
    h, d, c = entry[0], entry[1], entry[2]
    k = bisect_left(lst, (h,))
    if k < len(lst) and lst[k][0] == h:
        _, d0, c0, f0 = lst[k]
        if d < d0:
            lst[k] = (h, d, c, True)
            return REPLACED
        if d == d0:
            lst[k] = (h, d, min(c + c0, U64_MAX), f0)
            return ACCUMULATED
        return UNCHANGED
    lst.insert(k, (h, d, c, True))
    return INSERTED


class _Ctx:
    def __init__(self, idx: LabelIndex, g, cfg: UpdateConfig):
        self.idx = idx
        self.inv_in, self.inv_out = idx.inverted()
        self.lin, self.lout = idx.lists()
        self.order = idx.ordering.order.tolist()
        self.rank = idx.ordering.rank.tolist()
        self.g = g.base if isinstance(g, BipartiteGraph) else g
        if self.g.n != idx.n:
            raise ValueError(f"graph has {self.g.n} vertices, index {idx.n}")
        self.bip = idx.bipartite
        self.cfg = cfg
        self.minimal = cfg.strategy is Strategy.MINIMALITY
        self.stats = UpdateStats()
        self.touched_in = set()
        self.touched_out = set()

    def dist(self, s, t):
        """Index distance ``s -> t`` that stays exact on a couple-skipping index."""
        if self.bip and s & 1 and t != s ^ 1:
            d = dist_lists(self.lout[s ^ 1], self.lin[t])
            return d - 1 if d < INF else INF
        return dist_lists(self.lout[s], self.lin[t])

    def label(self, side, w, r, d, c):
        lst = (self.lin if side == IN else self.lout)[w]
        status = update_label((r, d, c), lst)
        if status == UNCHANGED:
            return
        setattr(self.stats, status, getattr(self.stats, status) + 1)
        if status == INSERTED:
            (self.inv_in if side == IN else self.inv_out)[self.order[r]].add(w)
        (self.touched_in if side == IN else self.touched_out).add(w)
        if self.minimal and status != ACCUMULATED:
            clean_label(self, w, side)

    def insert_absent(self, side, w, r, d, c, canonical):
        lst = (self.lin if side == IN else self.lout)[w]
        k = bisect_left(lst, (r,))
        if k < len(lst) and lst[k][0] == r:
            return
        lst.insert(k, (r, d, c, canonical))
        (self.inv_in if side == IN else self.inv_out)[self.order[r]].add(w)
        self.stats.inserted += 1

    def drop(self, side, w, hub_ranks):
        lists, inv = (self.lin, self.inv_in) if side == IN else (self.lout, self.inv_out)
        lst = lists[w]
        keep = [e for e in lst if e[0] not in hub_ranks or self.order[e[0]] == w]
        if len(keep) != len(lst):
            for e in lst:
                if e[0] in hub_ranks and self.order[e[0]] != w:
                    inv[self.order[e[0]]].discard(w)
            self.stats.deleted += len(lst) - len(keep)
            lists[w] = keep

    def finish(self, t0):
        self.idx.flags_stale = True
        self.idx._packed = None
        self.stats.seconds = time.perf_counter() - t0
        return self.stats


def clean_label(ctx: _Ctx, w, side):
    """Drop entries around ``w`` whose distance the index now beats.

    For ``side == IN`` that is every entry of ``L_in(w)`` plus the ``w``
    entries in the out-labels listed by ``inv_out(w)``; ``OUT`` mirrors it.
    """
    order, rank = ctx.order, ctx.rank
    if side == IN:
        own, other, inv_own, inv_other = ctx.lin, ctx.lout, ctx.inv_in, ctx.inv_out
        pair = lambda owner, hub: (hub, owner)  # noqa: E731
    else:
        own, other, inv_own, inv_other = ctx.lout, ctx.lin, ctx.inv_out, ctx.inv_in
        pair = lambda owner, hub: (owner, hub)  # noqa: E731
    lst = own[w]
    stale = [e for e in lst if order[e[0]] != w and ctx.dist(*pair(w, order[e[0]])) < e[1]]
    if stale:
        gone = {e[0] for e in stale}
        own[w] = [e for e in lst if e[0] not in gone]
        for e in stale:
            inv_own[order[e[0]]].discard(w)
        ctx.stats.deleted += len(stale)
    rw = rank[w]
    for x in list(inv_other[w]):
        if x == w:
            continue
        xl = other[x]
        k = find_entry(xl, rw)
        s, t = (x, w) if side == IN else (w, x)
        if k >= 0 and ctx.dist(s, t) < xl[k][1]:
            del xl[k]
            inv_other[w].discard(x)
            ctx.stats.deleted += 1


def forward_pass(ctx: _Ctx, r, b, d0, c0):
    """Push paths that enter ``b`` through the new edge into in-labels of hub rank ``r``."""
    rank, lin, out_adj = ctx.rank, ctx.lin, ctx.g.out_adj
    if rank[b] <= r:
        return
    lout_h = ctx.lout[ctx.order[r]]
    D = {b: d0}
    C = {b: c0}
    q = deque([b])
    while q:
        w = q.popleft()
        ctx.stats.visited += 1
        if D[w] > dist_lists(lout_h, lin[w]):
            continue
        ctx.label(IN, w, r, D[w], C[w])
        src = w
        if ctx.bip:
            src = w ^ 1
            D[src] = D[w] + 1
            C[src] = C[w]
            ctx.label(IN, src, r, D[src], C[src])
        nd = D[src] + 1
        for u in out_adj[src]:
            if rank[u] <= r:
                continue
            du = D.get(u)
            if du is None:
                D[u] = nd
                C[u] = C[src]
                q.append(u)
            elif du == nd:
                C[u] = min(C[u] + C[src], U64_MAX)


def backward_pass(ctx: _Ctx, r, a, d0, c0):
    """Mirror of :func:`forward_pass`: out-labels, searching in-edges from ``a``."""
    rank, lout, in_adj = ctx.rank, ctx.lout, ctx.g.in_adj
    if rank[a] <= r:
        return
    hub = ctx.order[r]
    lin_h = ctx.lin[hub]
    D = {a: d0}
    C = {a: c0}
    q = deque([a])
    while q:
        w = q.popleft()
        ctx.stats.visited += 1
        if D[w] > dist_lists(lout[w], lin_h):
            continue
        ctx.label(OUT, w, r, D[w], C[w])
        src = w
        if ctx.bip:
            if w == hub ^ 1:
                continue
            src = w ^ 1
            D[src] = D[w] + 1
            C[src] = C[w]
            ctx.label(OUT, src, r, D[src], C[src])
        nd = D[src] + 1
        for u in in_adj[src]:
            if rank[u] <= r:
                continue
            du = D.get(u)
            if du is None:
                D[u] = nd
                C[u] = C[src]
                q.append(u)
            elif du == nd:
                C[u] = min(C[u] + C[src], U64_MAX)


def _hub_sequence(ctx, ranks):
    ranks = sorted(ranks, reverse=ctx.cfg.hub_order == "ascending")
    if ctx.bip:
        ranks = [r for r in ranks if not ctx.order[r] & 1]
    ctx.stats.hubs = len(ranks)
    return ranks


def inc_cnt(idx: LabelIndex, g, a: int, b: int, cfg: UpdateConfig | None = None) -> UpdateStats:
    """Repair ``idx`` after edge ``a -> b`` was added to ``g``."""
    t0 = time.perf_counter()
    ctx = _Ctx(idx, g, cfg or UpdateConfig())
    if not ctx.g.has_edge(a, b):
        raise ValueError(f"edge ({a}, {b}) must be inserted into the graph first")
    # snapshot: a pass never rewrites the seed entries of a later hub
    seeds_a = {e[0]: (e[1], e[2]) for e in ctx.lin[a]}
    seeds_b = {e[0]: (e[1], e[2]) for e in ctx.lout[b]}
    for r in _hub_sequence(ctx, seeds_a.keys() | seeds_b.keys()):
        hub = ctx.order[r]
        if r in seeds_a:
            d, c = seeds_a[r]
            if ctx.cfg.seed_count == "spcnt":
                d, c = spcnt_lists(ctx.lout[hub], ctx.lin[a])
            forward_pass(ctx, r, b, d + 1, c)
        if r in seeds_b:
            d, c = seeds_b[r]
            if ctx.cfg.seed_count == "spcnt":
                d, c = spcnt_lists(ctx.lout[b], ctx.lin[hub])
            backward_pass(ctx, r, a, d + 1, c)
    if ctx.minimal:
        for w in list(ctx.touched_in):
            clean_label(ctx, w, IN)
        for w in list(ctx.touched_out):
            clean_label(ctx, w, OUT)
    return ctx.finish(t0)


def _affected(ctx: _Ctx, start, other, forward):
    """Vertices whose shortest paths from/to ``other`` may use the removed edge.

    ``forward=False``: ``{v : sd(v,a) + 1 = sd(v,b)}`` by a reverse search
    from ``a``; ``forward=True``: ``{u : sd(b,u) + 1 = sd(a,u)}`` from ``b``.
    Non-members are not expanded: every vertex on a shortest path from a
    member to ``start`` is itself a member.
    """
    adj = ctx.g.out_adj if forward else ctx.g.in_adj
    D = {start: 0}
    q = deque([start])
    members = set()
    while q:
        x = q.popleft()
        ctx.stats.visited += 1
        d_other = ctx.dist(other, x) if forward else ctx.dist(x, other)
        if d_other != D[x] + 1:
            continue
        members.add(x)
        for y in adj[x]:
            if y not in D:
                D[y] = D[x] + 1
                q.append(y)
    return members


def _recompute(ctx: _Ctx, r, targets, side):
    """Build-style pruned search for hub rank ``r`` writing only into ``targets``."""
    rank, lin, lout = ctx.rank, ctx.lin, ctx.lout
    hub = ctx.order[r]
    adj = ctx.g.out_adj if side == IN else ctx.g.in_adj
    D = {hub: 0}
    C = {hub: 1}
    q = deque([hub])
    while q:
        w = q.popleft()
        ctx.stats.visited += 1
        src = w
        if w != hub:
            if side == IN:
                d = dist_lists(lout[hub], lin[w], limit=r)
            else:
                d = dist_lists(lout[w], lin[hub], limit=r)
            if d < D[w]:
                continue
            if w in targets:
                ctx.insert_absent(side, w, r, D[w], C[w], d > D[w])
            if ctx.bip and side == OUT and w == hub ^ 1:
                continue
        if ctx.bip and (side == IN or w != hub):
            src = w ^ 1
            D[src] = D[w] + 1
            C[src] = C[w]
            if src in targets:
                ctx.insert_absent(side, src, r, D[src], C[src], True)
        nd = D[src] + 1
        for u in adj[src]:
            if rank[u] <= r:
                continue
            du = D.get(u)
            if du is None:
                D[u] = nd
                C[u] = C[src]
                q.append(u)
            elif du == nd:
                C[u] = min(C[u] + C[src], U64_MAX)


def dec_cnt(idx: LabelIndex, g, a: int, b: int, cfg: UpdateConfig | None = None) -> UpdateStats:
    """Repair ``idx`` after edge ``a -> b`` was removed from ``g``.

    Both strategies behave the same here: every dropped pair is regenerated
    exactly, so no dominated entries are produced.
    """
    t0 = time.perf_counter()
    ctx = _Ctx(idx, g, cfg or UpdateConfig())
    if ctx.g.has_edge(a, b):
        raise ValueError(f"edge ({a}, {b}) must be removed from the graph first")
    # step 1: affected sets, from the index as it was before the deletion
    hub_a = _affected(ctx, a, b, forward=False)
    hub_b = _affected(ctx, b, a, forward=True)
    ranks_a = {ctx.rank[v] for v in hub_a}
    ranks_b = {ctx.rank[u] for u in hub_b}
    # step 2: drop every entry pairing the two sets
    for u in hub_b:
        ctx.drop(IN, u, ranks_a)
    for v in hub_a:
        ctx.drop(OUT, v, ranks_b)
    # step 3: regenerate, highest hub first
    for r in _hub_sequence(ctx, ranks_a | ranks_b):
        if r in ranks_a:
            _recompute(ctx, r, hub_b, IN)
        if r in ranks_b:
            _recompute(ctx, r, hub_a, OUT)
    return ctx.finish(t0)


class WorkloadError(ValueError):
    """Malformed update-stream line."""


def parse_workload(lines):
    """Yield ``(op, u, v)`` from ``+ u v`` / ``- u v`` lines; ids stay as strings."""
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in "+-" or len(parts[0]) != 1:
            raise WorkloadError(f"line {lineno}: expected '+ u v' or '- u v', got {raw.rstrip()!r}")
        yield parts[0], parts[1], parts[2]


class CycleIndex:
    """An original graph, its label index, and edge updates kept in sync.

    ``mode="csc"`` indexes the split graph; ``mode="hpspc"`` indexes ``g``
    directly. Edge ids are original vertex ids.
    """

    def __init__(self, g: DirectedGraph, mode="csc", cfg: UpdateConfig | None = None, idx=None, ordering=None):
        self.g = g.copy()
        self.mode = mode
        self.cfg = cfg or UpdateConfig()
        if idx is None:
            idx, indexed = build(self.g, mode, ordering)
        elif mode == "csc":
            indexed = bipartite_convert(self.g)
        else:
            indexed = self.g
        self.idx = idx
        self.indexed = indexed

    def _edge(self, v, w):
        return (2 * v + 1, 2 * w) if self.mode == "csc" else (v, w)

    def _indexed_graph(self):
        return self.indexed.base if self.mode == "csc" else self.indexed

    def insert_edge(self, v, w) -> UpdateStats:
        if not self.g.insert_edge(v, w):
            return UpdateStats()
        a, b = self._edge(v, w)
        if self.mode == "csc":
            self._indexed_graph().insert_edge(a, b)
        return inc_cnt(self.idx, self.indexed, a, b, self.cfg)

    def delete_edge(self, v, w) -> UpdateStats:
        if not self.g.delete_edge(v, w):
            return UpdateStats()
        a, b = self._edge(v, w)
        if self.mode == "csc":
            self._indexed_graph().delete_edge(a, b)
        return dec_cnt(self.idx, self.indexed, a, b, self.cfg)

    def sccnt(self, v):
        if self.mode == "csc":
            return sccnt_csc(self.idx, v, self.indexed, self.cfg.min_cycle_len)
        return sccnt_hpspc(self.idx, self.g, v, self.cfg.min_cycle_len)

    def spcnt(self, s, t):
        if self.mode == "csc":
            return csc_spcnt(self.idx, s, t)
        return spcnt(self.idx, s, t)

    def apply(self, op, v, w) -> UpdateStats:
        return self.insert_edge(v, w) if op == "+" else self.delete_edge(v, w)
