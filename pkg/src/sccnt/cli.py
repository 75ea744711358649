"""Command-line interface: build, query, bench, update, gen."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from . import __version__
from .bench import rows_to_csv, run_bench
from .build import build_csc, build_hpspc
from .dynamic import CycleIndex, UpdateConfig, WorkloadError, parse_workload
from .generators import MODELS, generate
from .graph import DirectedGraph, EdgeListError, GraphFormatError, bipartite_convert, read_graph, write_edge_list
from .labels import IndexFormatError, check_graph_matches, compute_ordering, load_index_file, save_index_file
from .query import csc_spcnt, sccnt_bfs, sccnt_csc, sccnt_hpspc, spcnt

log = logging.getLogger("sccnt")


class CliError(Exception):
    pass


def _fmt(res):
    return f"{'none' if res.length is None else res.length} {res.count}"


def _vertex(g: DirectedGraph, label):
    try:
        return g.vertex_id(label)
    except KeyError:
        raise CliError(f"unknown vertex {label!r}") from None


def _print_labels(idx, names, out):
    for v in range(idx.n):
        def fmt(entries):
            return " ".join(f"({names[e.hub]},{e.dist},{e.count})" for e in entries)
        out.write(f"{names[v]}\tin: {fmt(idx.in_label(v))}\tout: {fmt(idx.out_label(v))}\n")


def cmd_build(args, out):
    g = read_graph(args.graph)
    t0 = time.perf_counter()
    if args.mode == "csc":
        gb = bipartite_convert(g)
        idx = build_csc(gb, compute_ordering(gb))
        names = gb.base.labels
    else:
        idx = build_hpspc(g, compute_ordering(g))
        names = g.labels
    elapsed = time.perf_counter() - t0
    save_index_file(idx, args.out)
    size = os.path.getsize(args.out)
    out.write(f"mode={args.mode} n={g.n} m={g.m} entries={idx.num_entries()} "
              f"index_time_s={elapsed:.6f} index_bytes={size}\n")
    if args.print_labels:
        _print_labels(idx, names, out)


def _load_pair(args):
    g = read_graph(args.graph)
    idx = load_index_file(args.index)
    try:
        check_graph_matches(idx, g)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return g, idx


def cmd_query(args, out):
    g, idx = _load_pair(args)
    gb = bipartite_convert(g) if idx.bipartite else None
    ml = args.min_cycle_len
    if args.pair:
        s, t = (_vertex(g, x) for x in args.pair)
        query = csc_spcnt if idx.bipartite else spcnt
        query(idx, s, t)  # untimed: loads compiled kernels
        t0 = time.perf_counter_ns()
        res = csc_spcnt(idx, s, t) if idx.bipartite else spcnt(idx, s, t)
        lat = (time.perf_counter_ns() - t0) / 1000
        out.write(f"{_fmt(res)}\t{lat:.2f}us\n")
        return
    if args.vertex is not None:
        vertices = [_vertex(g, args.vertex)]
    else:
        vertices = range(g.n)

    def run(v):
        if args.method == "bfs":
            return sccnt_bfs(g, v, ml)
        if idx.bipartite:
            return sccnt_csc(idx, v, gb, ml)
        return sccnt_hpspc(idx, g, v, ml)

    if g.n:
        run(vertices[0])  # untimed: loads compiled kernels
    for v in vertices:
        t0 = time.perf_counter_ns()
        res = run(v)
        lat = (time.perf_counter_ns() - t0) / 1000
        prefix = "" if args.vertex is not None else f"{g.labels[v]} "
        out.write(f"{prefix}{_fmt(res)}\t{lat:.2f}us\n")


def cmd_bench(args, out):
    g = read_graph(args.graph)
    rows = run_bench(g, args.clusters, args.queries, args.seed, args.min_cycle_len)
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    out.write(text)


def cmd_update(args, out):
    g, idx = _load_pair(args)
    mode = "csc" if idx.bipartite else "hpspc"
    ci = CycleIndex(g, mode, UpdateConfig(args.strategy, args.min_cycle_len), idx=idx)
    with open(args.workload, encoding="utf-8") as fh:
        ops = list(parse_workload(fh))
    out.write("step\top\tu\tv\tms\tinserted\treplaced\taccumulated\tdeleted\tentries\n")
    for step, (op, a, b) in enumerate(ops, 1):
        u, v = _vertex(g, a), _vertex(g, b)
        stats = ci.apply(op, u, v)
        out.write(f"{step}\t{op}\t{a}\t{b}\t{stats.seconds * 1000:.3f}\t{stats.inserted}\t{stats.replaced}\t"
                  f"{stats.accumulated}\t{stats.deleted}\t{ci.idx.num_entries()}\n")
    if args.out:
        save_index_file(ci.idx, args.out)
    if args.graph_out:
        with open(args.graph_out, "w", encoding="utf-8") as fh:
            write_edge_list(ci.g, fh)


def cmd_gen(args, out):
    g = generate(args.model, args.n, args.m, args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_edge_list(g, fh)
    else:
        write_edge_list(g, out)


def make_parser():
    p = argparse.ArgumentParser(prog="sccnt", description="Shortest cycle counting with hub labels.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an index from an edge list")
    b.add_argument("graph")
    b.add_argument("--mode", choices=("csc", "hpspc"), default="csc")
    b.add_argument("--out", required=True)
    b.add_argument("--print-labels", action="store_true")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer SCCnt or SPCnt queries")
    q.add_argument("index")
    q.add_argument("graph")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--vertex")
    g.add_argument("--all", action="store_true")
    g.add_argument("--pair", nargs=2, metavar=("S", "T"))
    q.add_argument("--method", choices=("index", "bfs"), default="index")
    q.add_argument("--min-cycle-len", type=int, choices=(2, 3), default=3)
    q.set_defaults(func=cmd_query)

    be = sub.add_parser("bench", help="per-cluster latency CSV")
    be.add_argument("graph")
    be.add_argument("--clusters", type=int, default=5)
    be.add_argument("--queries", type=int, default=100)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--min-cycle-len", type=int, choices=(2, 3), default=3)
    be.add_argument("--out")
    be.set_defaults(func=cmd_bench)

    u = sub.add_parser("update", help="apply a +/- edge workload to an index")
    u.add_argument("index")
    u.add_argument("graph")
    u.add_argument("workload")
    u.add_argument("--strategy", choices=("redundancy", "minimality"), default="redundancy")
    u.add_argument("--min-cycle-len", type=int, choices=(2, 3), default=3)
    u.add_argument("--out", help="write the updated index here")
    u.add_argument("--graph-out", help="write the updated edge list here")
    u.set_defaults(func=cmd_update)

    gen = sub.add_parser("gen", help="generate a synthetic edge list")
    gen.add_argument("--model", choices=MODELS, default="erdos")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)
    return p


def main(argv=None, out=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.command == "bench" and args.clusters < 1:
        print("error: --clusters must be positive", file=sys.stderr)
        return 2
    try:
        args.func(args, out or sys.stdout)
    except (CliError, EdgeListError, GraphFormatError, IndexFormatError, WorkloadError,
            FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
