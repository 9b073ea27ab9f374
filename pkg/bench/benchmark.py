"""Benchmark the hot kernels on both lanes: numba-compiled vs the same
source interpreted over NumPy arrays.

    python3 bench/benchmark.py [--vertices N] [--edges M] [--seed S]

The numba lane is warmed (compiled) before timing; reported times are the
best of three runs.  Setting NETCOMM_NUMBA=0 disables the compiled lane,
in which case both columns run the interpreter and the speedup is ~1.
"""

import argparse
import time

import numpy as np

from netcomm import Graph, backend_name
from netcomm._kernels import ACTIVE_KERNELS, PURE_KERNELS


def synthetic_graph(n, m, seed):
    rng = np.random.default_rng(seed)
    pairs = set()
    while len(pairs) < m:
        u, v = rng.integers(0, n, 2)
        if u != v:
            pairs.add((min(int(u), int(v)), max(int(u), int(v))))
    pairs = sorted(pairs)
    labels = [f"v{i}" for i in range(n)]
    eu = [p[0] for p in pairs]
    ev = [p[1] for p in pairs]
    weights = rng.integers(1, 4, len(pairs)).astype(float)
    return Graph(labels, eu, ev, weights)


def best_of(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads(g, seed):
    rng = np.random.default_rng(seed)
    n, m = g.n_vertices, g.n_edges
    active = np.ones(m, np.uint8)

    def edge_betweenness(kern):
        return lambda: kern(g.indptr, g.nbr, g.nbr_edge, active, n, m)

    def component_labels(kern):
        return lambda: kern(g.indptr, g.nbr, g.nbr_edge, active, n)

    def triangles(kern):
        return lambda: kern(g.indptr, g.nbr, g.edges_u, g.edges_v)

    n_temps = 120
    q = 12
    temps = 1.0 * 0.97 ** np.arange(n_temps)
    orders = np.stack([rng.permutation(n) for _ in range(n_temps)]).astype(np.int64)
    props = rng.integers(0, q, (n_temps, n)).astype(np.int64)
    unis = rng.random((n_temps, n))
    spins0 = rng.integers(0, q, n).astype(np.int64)
    wcsr = g.edge_weight_csr()

    def spinglass(kern):
        def run():
            spins = spins0.copy()
            comm = np.bincount(spins, weights=g.strength, minlength=q)
            kern(g.indptr, g.nbr, wcsr, g.strength, 2.0 * g.total_weight,
                 1.0, spins, comm, temps, orders, props, unis)
        return run

    pos0 = rng.random((n, 2))

    def fr_layout(kern):
        def run():
            pos = pos0.copy()
            kern(pos, g.edges_u, g.edges_v, float(np.sqrt(1.0 / n)), 0.1,
                 0.1 / 100, 100)
        return run

    rows, cols = 6, 10
    counts = rng.integers(0, 9, (rows, cols)) + 1
    row_idx = np.repeat(np.arange(rows), counts.sum(axis=1)).astype(np.int64)
    col_idx = np.concatenate([np.repeat(np.arange(cols), counts[r])
                              for r in range(rows)]).astype(np.int64)
    total = int(counts.sum())
    expected = np.outer(counts.sum(axis=1), counts.sum(axis=0)) / total
    perms = np.stack([rng.permutation(total) for _ in range(500)]).astype(np.int64)
    obs = PURE_KERNELS["chisq_stat"](counts.astype(float), expected)

    def chisq_mc(kern):
        return lambda: kern(row_idx, col_idx, perms, expected, obs)

    return [
        ("edge_betweenness", f"full Brandes pass, n={n} m={m}", edge_betweenness),
        ("component_labels", f"BFS labelling, n={n}", component_labels),
        ("common_neighbor_total", f"triangle scan, m={m}", triangles),
        ("spinglass_anneal", f"{n_temps} sweeps x {n} spins", spinglass),
        ("fr_iterate", f"100 layout iterations, n={n}", fr_layout),
        ("chisq_mc_count", f"500 replicates, {total} observations", chisq_mc),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--vertices", type=int, default=120)
    ap.add_argument("--edges", type=int, default=600)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = synthetic_graph(args.vertices, args.edges, args.seed)
    print(f"active lane: {backend_name()}   graph: {g.n_vertices} vertices, "
          f"{g.n_edges} edges")
    header = f"{'kernel':<24}{'workload':<34}{'active':>10}{'pure':>10}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, desc, make in workloads(g, args.seed):
        fast = make(ACTIVE_KERNELS[name])
        pure = make(PURE_KERNELS[name])
        fast()  # warm-up: JIT compile outside the timing
        t_fast = best_of(fast)
        t_pure = best_of(pure, repeats=1)
        ratio = t_pure / t_fast if t_fast > 0 else float("inf")
        print(f"{name:<24}{desc:<34}{t_fast * 1e3:>8.2f}ms"
              f"{t_pure * 1e3:>8.1f}ms{ratio:>8.1f}x")


if __name__ == "__main__":
    main()
