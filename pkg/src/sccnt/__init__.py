"""Shortest cycle counting with 2-hop hub labels over a split directed graph."""
__version__ = "0.1.0"

from .graph import (BipartiteGraph, DirectedGraph, bipartite_convert, load_edge_list, read_graph,
                    save_graph, load_graph)
from .labels import (LabelEntry, LabelIndex, QueryResult, VertexOrdering, compute_ordering,
                     decode_entry, encode_entry, load_index, save_index)
from .build import build_csc, build_csc_noskip, build_hpspc
from .query import csc_spcnt, sccnt_bfs, sccnt_csc, sccnt_hpspc, spcnt
from .dynamic import CycleIndex, Strategy, UpdateConfig, UpdateStats, dec_cnt, inc_cnt
from .oracle import oracle_apsp, oracle_sccnt

__all__ = [
    "BipartiteGraph", "DirectedGraph", "bipartite_convert", "load_edge_list", "read_graph",
    "save_graph", "load_graph", "LabelEntry", "LabelIndex", "QueryResult", "VertexOrdering",
    "compute_ordering", "decode_entry", "encode_entry", "load_index", "save_index",
    "build_csc", "build_csc_noskip", "build_hpspc", "csc_spcnt", "sccnt_bfs", "sccnt_csc",
    "sccnt_hpspc", "spcnt", "CycleIndex", "Strategy", "UpdateConfig", "UpdateStats",
    "dec_cnt", "inc_cnt", "oracle_apsp", "oracle_sccnt",
]
