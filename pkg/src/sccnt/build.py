"""Index construction: plain hub labeling and the couple-skipping bipartite build."""
from __future__ import annotations

import logging
import time

import numpy as np

from . import kernels
from .graph import BipartiteGraph, DirectedGraph
from .labels import LabelIndex, PackedLabels, VertexOrdering, compute_ordering

log = logging.getLogger(__name__)


def _run(g: DirectedGraph, ordering: VertexOrdering, bipartite: bool, canonical_only: bool) -> PackedLabels:
    if len(ordering) != g.n:
        raise ValueError(f"ordering covers {len(ordering)} vertices, graph has {g.n}")
    out_off, out_nbr, in_off, in_nbr = g.csr()
    t0 = time.perf_counter()
    ins, outs = kernels.build_labels(out_off, out_nbr, in_off, in_nbr,
                                     ordering.rank, ordering.order, bipartite, canonical_only)
    log.debug("label build over %d vertices took %.3fs", g.n, time.perf_counter() - t0)
    return PackedLabels(*outs, *ins)


def build_hpspc(g: DirectedGraph, ordering: VertexOrdering | None = None, canonical_only=True) -> LabelIndex:
    """Shortest-path counting labels over ``g`` itself.

    ``canonical_only`` restricts the pruning distance test to canonical
    entries; both settings yield the same index.
    """
    if ordering is None:
        ordering = compute_ordering(g)
    return LabelIndex(ordering, False, packed=_run(g, ordering, False, canonical_only))


def build_csc(gb: BipartiteGraph, ordering: VertexOrdering | None = None, canonical_only=True) -> LabelIndex:
    """Cycle-counting labels over the split graph, with couple skipping."""
    if ordering is None:
        ordering = compute_ordering(gb)
    _check_couples(ordering)
    return LabelIndex(ordering, True, packed=_run(gb.base, ordering, True, canonical_only))


def build_csc_noskip(gb: BipartiteGraph, ordering: VertexOrdering | None = None) -> LabelIndex:
    """Reference build over the split graph treating it as an ordinary digraph."""
    if ordering is None:
        ordering = compute_ordering(gb)
    return LabelIndex(ordering, False, packed=_run(gb.base, ordering, False, True))


def build(g: DirectedGraph, mode="csc", ordering=None):
    """Build from an original graph. Returns ``(index, graph_indexed)``."""
    if mode == "csc":
        from .graph import bipartite_convert
        gb = bipartite_convert(g)
        if ordering is not None and len(ordering) == g.n:
            ordering = ordering.bipartite()
        return build_csc(gb, ordering), gb
    if mode == "hpspc":
        return build_hpspc(g, ordering), g
    raise ValueError(f"unknown mode {mode!r}")


def _check_couples(ordering: VertexOrdering):
    order = ordering.order
    if len(order) % 2:
        raise ValueError("bipartite ordering needs an even vertex count")
    if len(order) and not (np.all(order[0::2] % 2 == 0) and np.all(order[1::2] == order[0::2] + 1)):
        raise ValueError("bipartite ordering must rank each v_in directly above its v_out")
