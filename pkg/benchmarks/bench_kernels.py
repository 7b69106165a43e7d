#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy/Python fallback.

Times the word-count parse (random and periodic input) and the two-pointer
coincidence matching on identical inputs, and checks that both backends
return identical results while timing them.

Usage: python benchmarks/bench_kernels.py [--sizes 10000,100000,1000000]
"""

import argparse
import time

import numpy as np

from bellrand import _kernels_py

try:
    from bellrand import _kernels
except ImportError:
    _kernels = None


def _time(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_case(label, fn_args, check=None):
    t_py, r_py = _time(getattr(_kernels_py, fn_args[0]), *fn_args[1:])
    if _kernels is None:
        print(f"{label:38s} pure {t_py*1e3:9.1f} ms   compiled      n/a")
        return
    t_cy, r_cy = _time(getattr(_kernels, fn_args[0]), *fn_args[1:])
    agree = check(r_py, r_cy) if check else True
    speedup = t_py / t_cy if t_cy > 0 else float("inf")
    mark = "" if agree else "  !! MISMATCH"
    print(
        f"{label:38s} pure {t_py*1e3:9.1f} ms   compiled {t_cy*1e3:9.1f} ms"
        f"   x{speedup:6.1f}{mark}"
    )


def positions_equal(a, b):
    return np.array_equal(a, b)


def matches_equal(a, b):
    return np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="10000,100000,1000000")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _kernels is None:
        print("compiled extension not built; timing the pure backend only\n")

    rng = np.random.default_rng(0)
    for n in sizes:
        bits = rng.integers(0, 2, n, dtype=np.uint8)
        bench_case(f"lz76 parse, random bits, n={n}", ("lz76_parse_positions", bits), positions_equal)
    for n in sizes:
        bits = np.tile(np.array([0, 1, 1, 0, 1], dtype=np.uint8), n // 5 + 1)[:n]
        bench_case(f"lz76 parse, periodic bits, n={n}", ("lz76_parse_positions", bits), positions_equal)
    for n in sizes:
        a = np.cumsum(rng.exponential(1.0, n))
        b = np.cumsum(rng.exponential(1.0, n))
        bench_case(
            f"two-pointer match, n={n} events", ("match_indices", a, b, 0.5, 0.0), matches_equal
        )
        bench_case(f"match count only, n={n} events", ("match_count", a, b, 0.5, 0.0))


if __name__ == "__main__":
    main()
