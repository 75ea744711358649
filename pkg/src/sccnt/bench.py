"""Per-cluster SCCnt latency benchmark.

Vertices are bucketed by min(in-degree, out-degree) into equal-width ranges
between the smallest and largest such degree; the top range is "High".
Each sampled vertex is queried with the bipartite index, the plain index
and the index-free search. One untimed warm-up pass precedes timing.
"""
from __future__ import annotations

import csv
import io
import time

import numpy as np

from .build import build_csc, build_hpspc
from .graph import DirectedGraph, bipartite_convert
from .query import sccnt_bfs, sccnt_csc, sccnt_hpspc

CLUSTER_NAMES = ("High", "Mid-high", "Mid-low", "Low", "Bottom")
METHODS = ("csc", "hpspc", "bfs")
CSV_FIELDS = ["cluster", "deg_lo", "deg_hi", "vertices", "sampled"] + [
    f"{m}_{stat}" for m in METHODS for stat in ("mean_us", "p99_us")
]


def cluster_names(k):
    if k == len(CLUSTER_NAMES):
        return list(CLUSTER_NAMES)
    return [f"C{i + 1}" for i in range(k)]


def degree_clusters(g: DirectedGraph, k=5):
    """``[(name, lo, hi, vertices)]`` from highest to lowest degree range."""
    deg = np.array([g.min_in_out_degree(v) for v in range(g.n)], dtype=np.int64)
    names = cluster_names(k)
    if g.n == 0:
        return [(name, 0, 0, []) for name in names]
    lo, hi = int(deg.min()), int(deg.max())
    width = (hi - lo + 1) / k
    # bucket 0 is the lowest range
    bucket = np.minimum(((deg - lo) / width).astype(np.int64), k - 1)
    out = []
    for i in range(k - 1, -1, -1):
        b_lo = lo + int(np.ceil(i * width))
        b_hi = lo + int(np.ceil((i + 1) * width)) - 1
        b_hi = min(b_hi, hi)
        if b_lo > b_hi:
            # range narrower than one degree step: nothing can land here
            b_lo = b_hi = ""
        out.append((names[k - 1 - i], b_lo, b_hi, np.flatnonzero(bucket == i).tolist()))
    return out


def _time(fn, vertices):
    lat = []
    for v in vertices:
        t0 = time.perf_counter_ns()
        fn(v)
        lat.append((time.perf_counter_ns() - t0) / 1000.0)
    return lat


def run_bench(g: DirectedGraph, clusters=5, queries=100, seed=0, min_cycle_len=3, methods=METHODS):
    """Return one dict per cluster with mean/p99 latency in microseconds per method."""
    rng = np.random.default_rng(seed)
    runners = {}
    if "csc" in methods:
        gb = bipartite_convert(g)
        csc = build_csc(gb)
        runners["csc"] = lambda v: sccnt_csc(csc, v, gb, min_cycle_len)
    if "hpspc" in methods:
        hp = build_hpspc(g)
        runners["hpspc"] = lambda v: sccnt_hpspc(hp, g, v, min_cycle_len)
    if "bfs" in methods:
        runners["bfs"] = lambda v: sccnt_bfs(g, v, min_cycle_len)
    rows = []
    for name, lo, hi, members in degree_clusters(g, clusters):
        if queries <= 0:
            continue
        sample = members
        if len(members) > queries:
            sample = rng.choice(members, size=queries, replace=False).tolist()
        row = {"cluster": name, "deg_lo": lo, "deg_hi": hi, "vertices": len(members), "sampled": len(sample)}
        for m in METHODS:
            if m not in runners or not sample:
                row[f"{m}_mean_us"] = row[f"{m}_p99_us"] = ""
                continue
            _time(runners[m], sample)  # warm-up
            lat = _time(runners[m], sample)
            row[f"{m}_mean_us"] = f"{float(np.mean(lat)):.3f}"
            row[f"{m}_p99_us"] = f"{float(np.percentile(lat, 99)):.3f}"
        rows.append(row)
    return rows


def rows_to_csv(rows, fh=None):
    own = fh is None
    fh = fh or io.StringIO()
    w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return fh.getvalue() if own else None
