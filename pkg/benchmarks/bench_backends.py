"""Compare the compiled search kernels with the pure-Python searches.

Both backends must produce the same verdicts and counters; only wall time is
allowed to differ.  Usage::

    python3 benchmarks/bench_backends.py [--scale 1.0] [--repeat 3] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from buchi import kernels
from buchi.automata import ExplicitGBA, explicit_provider
from buchi.generators import GenConfig, gen_gba_ring, gen_trivial_accepting, random_gba
from buchi.kernels import run_algorithm


def ring(n: int) -> ExplicitGBA:
    """One long cycle through a single accepting state: a deep search."""
    succ = [[(i + 1) % n] for i in range(n)]
    acc = [0] * n
    acc[n // 2] = 1
    return ExplicitGBA(n, 0, succ, acc, 1)


def big_random(n: int, **kw) -> ExplicitGBA:
    """First seeded random automaton whose reachable part covers most states."""
    seed = 0
    while True:
        g = random_gba(GenConfig(n=n, seed=seed, **kw))
        if len(g.reachable()) >= 0.8 * n:
            return g
        seed += 1


def workloads(scale: float):
    def size(n):
        return max(10, int(n * scale))
    return [
        ("random-empty", big_random(size(50_000), avg_out_degree=3.0, acc_density=0.0),
         ("and", "baseline", "ascc", "gv", "c99")),
        ("random-k3", big_random(size(50_000), avg_out_degree=2.5, k=3, acc_density=0.001),
         ("ascc", "c99")),
        ("trivial-acc", gen_trivial_accepting(size(30_000), seed=3),
         ("and", "baseline", "sd", "ascc", "gv", "c99")),
        ("deep-ring", ring(size(200_000)), ("and", "ascc", "gv")),
        ("gba-ring", gen_gba_ring(size(100_000)), ("ascc", "c99")),
    ]


def timed(p, algo, backend, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        verdict, metrics = run_algorithm(p, algo, backend=backend)
        took = time.perf_counter() - start
        best = took if best is None else min(best, took)
    return verdict, metrics, best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=float, default=1.0, help="multiply instance sizes")
    ap.add_argument("--repeat", type=int, default=3, help="best of R timings per cell")
    ap.add_argument("--json", metavar="FILE", help="also write the rows as JSON")
    args = ap.parse_args(argv)
    if not kernels.COMPILED:
        print("compiled kernels are not built; run `python3 setup.py build_ext --inplace`",
              file=sys.stderr)
        return 2

    rows = []
    print(f"{'instance':<14}{'algo':<10}{'states':>9}{'post':>10}{'python s':>11}{'compiled s':>12}{'speedup':>9}")
    for name, g, algos in workloads(args.scale):
        p = explicit_provider(g)
        for algo in algos:
            vp, mp, tp = timed(p, algo, "python", args.repeat)
            vc, mc, tc = timed(p, algo, "compiled", args.repeat)
            if vp != vc or mp.counters() != mc.counters():
                print(f"backend mismatch on {name}/{algo}", file=sys.stderr)
                return 1
            speedup = tp / tc if tc > 0 else float("inf")
            rows.append({"instance": name, "algorithm": algo, "verdict": vp.kind,
                         "states": g.n, "post_calls": mp.post_calls,
                         "python_s": round(tp, 4), "compiled_s": round(tc, 4),
                         "speedup": round(speedup, 1)})
            print(f"{name:<14}{algo:<10}{g.n:>9}{mp.post_calls:>10}{tp:>11.3f}{tc:>12.4f}{speedup:>8.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"schema": 1, "rows": rows}, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
