"""Seeded synthetic digraphs for tests and benchmarks."""
from __future__ import annotations

import numpy as np

from .graph import DirectedGraph

MODELS = ("erdos", "chain", "star-cycles")


def _fill_random(g: DirectedGraph, m, rng, candidates=None, reciprocal=True):
    """Add random simple edges until ``g.m == m`` (or the graph is complete)."""
    n = g.n
    m = min(m, n * (n - 1))
    while g.m < m:
        batch = max(16, 2 * (m - g.m))
        if candidates is None:
            src = rng.integers(0, n, batch)
            dst = rng.integers(0, n, batch)
        else:
            src, dst = candidates(batch)
        before = g.m
        for a, b in zip(src.tolist(), dst.tolist()):
            if a != b and (reciprocal or not g.has_edge(b, a)):
                g.insert_edge(a, b)
                if g.m >= m:
                    break
        if g.m == before:
            break  # candidate pool exhausted
    return g


def erdos(n, m, seed=0) -> DirectedGraph:
    """``m`` distinct edges drawn uniformly."""
    return _fill_random(DirectedGraph(n), m, np.random.default_rng(seed))


def chain(n, m, seed=0) -> DirectedGraph:
    """A directed ring through all vertices plus random chords up to ``m`` edges."""
    g = DirectedGraph(n)
    if n > 1:
        for v in range(n):
            g.insert_edge(v, (v + 1) % n)
    return _fill_random(g, m, np.random.default_rng(seed))


def star_cycles(n, m, seed=0, centers=None) -> DirectedGraph:
    """Short leaf rings plus a few hubs with very high in- and out-degree.

    Vertices ``0..k-1`` are centers joined in a ring; the rest form rings of
    4-6 vertices. The remaining edge budget goes to center<->leaf spokes,
    half in each direction, so every center has min-in-out degree close to
    ``(m - n) / (2k)``. Spokes are never reciprocal, so no center sits on a
    2-cycle. Each center has at most one spoke per leaf, which caps ``m``.
    """
    rng = np.random.default_rng(seed)
    k = centers if centers is not None else max(1, n // 2500)
    k = min(k, n)
    g = DirectedGraph(n)
    if k == 2:
        g.insert_edge(0, 1)
    elif k > 2:
        for c in range(k):
            g.insert_edge(c, (c + 1) % k)
    leaves = rng.permutation(np.arange(k, n)).tolist()
    i = 0
    while len(leaves) - i >= 4:
        size = int(rng.integers(4, 7))
        if len(leaves) - i - size < 4:
            size = len(leaves) - i
        ring = leaves[i:i + size]
        for j, v in enumerate(ring):
            g.insert_edge(v, ring[(j + 1) % len(ring)])
        i += size
    if n > k:
        def spokes(batch):
            c = rng.integers(0, k, batch)
            leaf = rng.integers(k, n, batch)
            out = rng.random(batch) < 0.5
            return np.where(out, c, leaf), np.where(out, leaf, c)

        _fill_random(g, m, rng, spokes, reciprocal=False)
    return g


def generate(model, n, m, seed=0) -> DirectedGraph:
    if model == "erdos":
        return erdos(n, m, seed)
    if model == "chain":
        return chain(n, m, seed)
    if model == "star-cycles":
        return star_cycles(n, m, seed)
    raise ValueError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
