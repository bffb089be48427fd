"""Compare the compiled and pure-Python kernel backends.

Run with ``python3 benchmarks/bench_kernels.py [--nodes N] [--repeat R]``.
Each kernel is timed on the same random graph with every available
backend, and outputs are checked for bit-for-bit agreement.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from discourse_graph import kernels
from discourse_graph.cascade import edge_probabilities
from discourse_graph.graph import SimpleDigraph
from discourse_graph.influence import default_delta


def random_graph(n: int, mean_degree: float, seed: int) -> SimpleDigraph:
    rng = np.random.default_rng(seed)
    m = int(n * mean_degree)
    src = rng.integers(0, n, m)
    dst = rng.integers(0, n, m)
    keep = src != dst
    w = rng.integers(1, 4, int(keep.sum()))
    return SimpleDigraph([f"n{i:07d}" for i in range(n)], src[keep], dst[keep], w)


def cases(g: SimpleDigraph, threads: int) -> dict:
    wf = g.weights.astype(np.float64)
    prob = edge_probabilities(g, 0.1)
    seeds = np.arange(10, dtype=np.int64)
    small = g.n_nodes <= 5000
    out = {
        "voterank r=50": lambda k: k.voterank(g.indptr, g.targets, wf, g.out_degree(), 50, default_delta(g), threads),
        "ic_spreads 1000 runs": lambda k: k.ic_spreads(g.indptr, g.targets, prob, seeds, 1000, 7, threads),
    }
    if small:
        out["betweenness"] = lambda k: k.betweenness(g.indptr, g.targets, threads)
        out["harmonic_closeness"] = lambda k: k.harmonic_closeness(g.indptr, g.targets, threads)
    return out


def best_of(fn, repeat: int):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.asarray(a).tobytes() == np.asarray(b).tobytes()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=2000)
    ap.add_argument("--degree", type=float, default=8.0)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = random_graph(args.nodes, args.degree, args.seed)
    threads = kernels.thread_count()
    impls = kernels.backends()
    print(f"graph: {g.n_nodes} nodes, {g.n_edges} edges; threads={threads}; backends={', '.join(sorted(impls))}")
    print(f"{'kernel':<22}" + "".join(f"{name:>12}" for name in sorted(impls)) + f"{'speedup':>10}  identical")
    for label, fn in cases(g, threads).items():
        times, outputs = {}, {}
        for name, impl in sorted(impls.items()):
            times[name], outputs[name] = best_of(lambda: fn(impl), args.repeat)
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        same = len({_same(outputs["python"], o) for o in outputs.values()} - {True}) == 0
        print(f"{label:<22}" + "".join(f"{times[n]:>11.4f}s" for n in sorted(times)) + f"{speed:>9.1f}x  {same}")


if __name__ == "__main__":
    main()
