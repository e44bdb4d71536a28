"""Time the numpy and numba kernel backends on one simulation-sized block.

    python benchmarks/bench_kernels.py [--rows 4096] [--B 30] [--bag 10000] [--repeat 5]

Both backends consume the same uniforms, so their outputs must agree bit for bit;
the script checks that before reporting timings.
"""
import argparse
import time

import numpy as np

from evp import RandomSource, kernels
from evp.combinatorics import KINDS
from evp.estimators import weight_matrix


def pipeline(backend, bag, u_pool, u_truth, weights):
    idx = backend.draw_with_replacement(u_pool, bag.size)
    rows = backend.gather_sorted(bag, idx)
    sums = backend.weighted_sums(rows, weights)
    tidx = backend.draw_with_replacement(u_truth, bag.size)
    return sums, backend.gather_row_max(bag, tidx)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=4096)
    ap.add_argument("--B", type=int, default=30)
    ap.add_argument("--bag", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    src = RandomSource(0)
    bag = np.sort(src.spawn(0).generator().normal(0.6, 0.07, args.bag))
    u_pool = src.spawn(1).uniform((args.rows, args.B))
    u_truth = src.spawn(2).uniform((args.rows, args.B))
    weights = np.concatenate([weight_matrix(k, args.B) for k in KINDS])

    backends = [kernels.NUMPY]
    if kernels.NUMBA is None:
        print("numba not installed; timing the numpy backend only")
    else:
        backends.append(kernels.NUMBA)
        pipeline(kernels.NUMBA, bag, u_pool[:2], u_truth[:2], weights)  # compile

    results = {}
    for backend in backends:
        t, out = best_of(lambda: pipeline(backend, bag, u_pool, u_truth, weights), args.repeat)
        results[backend.name] = (t, out)
        print(f"{backend.name:>6}: {t * 1e3:8.2f} ms per block of {args.rows} rows")

    if len(results) == 2:
        (t_np, a), (t_nb, b) = results["numpy"], results["numba"]
        same = all(np.array_equal(x, y) for x, y in zip(a, b))
        print(f"outputs identical: {same}")
        print(f"speedup: {t_np / t_nb:.1f}x")
        if not same:
            raise SystemExit(1)


if __name__ == "__main__":
    main()
