#!/usr/bin/env python3
"""Timing comparison: numba-jitted kernels vs the pure-numpy fallback.

Run:  python benchmarks/bench_backends.py [--samples N] [--threads K]
"""

import argparse
import time

from qincompat.rng import stream_key


def time_call(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=2_000_000)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    from qincompat.kernels import numpy_backend

    backends = [numpy_backend]
    try:
        from qincompat.kernels import numba_backend

        if args.threads is not None:
            numba_backend.set_threads(args.threads)
        backends.append(numba_backend)
    except ImportError:
        print("numba unavailable; benchmarking the numpy path only")

    key = stream_key(7, 0)
    n = args.samples
    rows = []
    for be in backends:
        be.count_incompatible(key, 0, 1000, 1)  # warm up (jit compile)
        be.sum_unbiased_fg(key, 0, 1000)
        be.sample_pair_arrays(key, 0, 1000, 0)
        rows.append(
            (
                be.NAME,
                time_call(be.count_incompatible, key, 0, n, 1),
                time_call(be.sum_unbiased_fg, key, 0, n),
                time_call(be.sample_pair_arrays, key, 0, n // 4, 0),
            )
        )

    print(f"\n{n:,} samples per kernel call:")
    print(f"{'backend':<8} {'count_incompatible':>20} {'sum_unbiased_fg':>18} {'sample arrays (n/4)':>20}")
    for name, t1, t2, t3 in rows:
        print(f"{name:<8} {t1:>18.3f}s {t2:>16.3f}s {t3:>18.3f}s")
    if len(rows) == 2:
        print(
            f"speedup  {rows[0][1] / rows[1][1]:>18.1f}x {rows[0][2] / rows[1][2]:>16.1f}x "
            f"{rows[0][3] / rows[1][3]:>18.1f}x"
        )


if __name__ == "__main__":
    main()
