"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json]

Each workload is run once untimed (JIT warm-up), then ``--repeat`` times;
the best time is reported.  Both backends must return identical results.
"""
import argparse
import json
import time

import numpy as np

from chipdist import _kernels_numba as nb
from chipdist import _kernels_numpy as npk
from chipdist.chips import pigeonhole_threshold, step_bound
from chipdist.graphs import bidirect, build_graph, random_eulerian_digraph, random_graph


def workloads():
    rng = np.random.default_rng(2024)
    k5 = bidirect(build_graph(5, [(u, v, 2) for u in range(5) for v in range(u + 1, 5)]))
    grid = bidirect(random_graph(8, rng, max_mult=2, density=0.4))
    eul = random_eulerian_digraph(6, 5, 6, rng)
    dense = random_eulerian_digraph(14, 12, 14, rng)
    big = random_graph(40, rng, max_mult=3, density=0.3)

    def sim(d, chips, cap):
        chips = np.asarray(chips, dtype=np.int64)
        return lambda k: k.simulate(chips, d.arc_matrix, d.out_degrees, cap, False)

    def level(d, k):
        x = np.zeros(d.n, dtype=np.int64)
        return lambda m: m.first_nonterminating_at_level(
            x, d.arc_matrix, d.out_degrees, k, step_bound(d), pigeonhole_threshold(d))

    def reduce(g, f):
        f = np.asarray(f, dtype=np.int64)
        return lambda k: k.q_reduce(f, g.adjacency, 0)

    def fas(d):
        return lambda k: k.minfas_dp(d.arc_matrix)

    chips = grid.out_degrees.copy()  # above the pigeonhole bound, so all 20k steps run
    return [
        ("simulate: 8-vertex graph, 20k steps", sim(grid, chips, 20_000)),
        ("simulate: K5 doubled, 20k steps", sim(k5, np.full(5, 9), 20_000)),
        ("dist level scan: K5 doubled, k=4", level(k5, 4)),
        ("dist level scan: Eulerian n=6, k=3", level(eul, 3)),
        ("q_reduce: 40-vertex graph, heavy debt", reduce(big, rng.integers(-30, 10, size=big.n))),
        ("minfas DP: Eulerian n=14", fas(dense)),
    ]


def best_of(fn, kernel, repeat):
    fn(kernel)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(kernel)
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)
    rows = []
    for name, fn in workloads():
        t_nb, out_nb = best_of(fn, nb, args.repeat)
        t_np, out_np = best_of(fn, npk, args.repeat)
        if not same(out_nb, out_np):
            raise SystemExit(f"backends disagree on {name!r}")
        rows.append({"workload": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'workload':44s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for r in rows:
        print(f"{r['workload']:44s} {r['numba_s'] * 1e3:8.2f}ms {r['numpy_s'] * 1e3:8.2f}ms "
              f"{r['speedup']:7.1f}x")


if __name__ == "__main__":
    main()
