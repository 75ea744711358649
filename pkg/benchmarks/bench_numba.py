"""Compare the numba-compiled kernels against the plain numpy/Python fallback.

Each path runs in its own interpreter because ``SCCNT_NUMBA`` is read at
import time. The first (compiling) call is excluded from the timings.

    python benchmarks/bench_numba.py --n 3000 --m 9000
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import hashlib, json, sys, time
from sccnt import _jit
from sccnt.build import build_csc, build_hpspc
from sccnt.generators import generate
from sccnt.graph import bipartite_convert
from sccnt.query import sccnt_bfs, sccnt_csc, sccnt_hpspc

model, n, m, seed, queries = sys.argv[1], int(sys.argv[2]), int(sys.argv[3]), int(sys.argv[4]), int(sys.argv[5])
g = generate(model, n, m, seed)
gb = bipartite_convert(g)
small = generate(model, 16, 32, seed)
build_csc(bipartite_convert(small)); build_hpspc(small)  # warm-up / compile


def clock(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


csc, t_csc = clock(lambda: build_csc(gb))
hp, t_hp = clock(lambda: build_hpspc(g))
vs = list(range(min(queries, g.n)))
for v in vs[:1]:
    sccnt_csc(csc, v, gb); sccnt_hpspc(hp, g, v); sccnt_bfs(g, v)
res = {"numba": _jit.USE_NUMBA, "build_csc_s": t_csc, "build_hpspc_s": t_hp}
for name, fn in (("csc", lambda v: sccnt_csc(csc, v, gb)), ("hpspc", lambda v: sccnt_hpspc(hp, g, v)),
                 ("bfs", lambda v: sccnt_bfs(g, v))):
    answers, t = clock(lambda: [tuple(fn(v)) for v in vs])
    res[f"{name}_query_us"] = 1e6 * t / max(1, len(vs))
    res[f"{name}_digest"] = hashlib.sha256(repr(answers).encode()).hexdigest()
print(json.dumps(res))
"""


def run(flag, args):
    env = dict(os.environ, SCCNT_NUMBA=flag)
    cmd = [sys.executable, "-c", WORKER, args.model, str(args.n), str(args.m), str(args.seed), str(args.queries)]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--model", default="erdos")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--m", type=int, default=6000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--queries", type=int, default=200)
    args = p.parse_args()
    jit, py = run("1", args), run("0", args)
    print(f"{'metric':<18}{'numba':>14}{'fallback':>14}{'speedup':>10}")
    for key in ("build_csc_s", "build_hpspc_s", "csc_query_us", "hpspc_query_us", "bfs_query_us"):
        a, b = jit[key], py[key]
        print(f"{key:<18}{a:>14.4f}{b:>14.4f}{b / a if a else float('nan'):>9.1f}x")
    same = all(jit[f"{m}_digest"] == py[f"{m}_digest"] for m in ("csc", "hpspc", "bfs"))
    print(f"answers identical: {same}")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
