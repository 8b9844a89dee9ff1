#!/usr/bin/env python3
"""Benchmark the jitted kernels against their pure-numpy fallbacks.

Usage:
    python3 benchmarks/bench_kernels.py [--sizes 50,100,200] [--repeat 5]

The numba path is compiled (and cached) on first call; the warm-up run is
excluded from the timings. Set ARGSUM_NO_NUMBA=1 before launching to check
what the package itself would use on a numba-less install.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from argsum import kernels


def _time(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def random_similarity(rng: np.random.Generator, n: int) -> np.ndarray:
    raw = rng.uniform(0, 1, size=(n, n))
    sym = (raw + raw.T) / 2
    np.fill_diagonal(sym, 0.0)
    return np.ascontiguousarray(sym)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="50,100,200")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    impls = kernels.implementations()
    if "numba" not in impls["pagerank"]:
        print("numba path unavailable (ARGSUM_NO_NUMBA set or numba missing); "
              "benchmarking the numpy path only")

    rng = np.random.default_rng(0)
    header = f"{'kernel':<10} {'n':>5} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        sim = random_similarity(rng, n)
        weights = np.where(sim > 0.5, sim, 0.0)

        for kernel, arguments in (
            ("pagerank", (np.ascontiguousarray(weights), 0.85, 1e-8, 10_000)),
            ("linkage", (sim, 0.6)),
        ):
            numpy_fn = impls[kernel]["numpy"]
            t_numpy = _time(numpy_fn, *arguments, repeat=args.repeat)
            if "numba" in impls[kernel]:
                numba_fn = impls[kernel]["numba"]
                numba_fn(*arguments)  # warm-up / compile
                t_numba = _time(numba_fn, *arguments, repeat=args.repeat)
                print(f"{kernel:<10} {n:>5} {t_numpy:>12.6f} {t_numba:>12.6f} "
                      f"{t_numpy / t_numba:>8.1f}x")
            else:
                print(f"{kernel:<10} {n:>5} {t_numpy:>12.6f} {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
