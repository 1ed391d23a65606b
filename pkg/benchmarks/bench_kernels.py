#!/usr/bin/env python3
"""Benchmark the enumeration kernels: numba jit vs the pure-numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--repeat N]

The first jit call compiles (cached on disk afterwards); a warmup run keeps
compilation out of the timings.
"""

import argparse
import statistics
import time

import numpy as np

from qmtop import _kernels


def time_callable(fn, *args, repeat=5, warmup=1):
    for _ in range(warmup):
        fn(*args)
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


CASES = [
    ("preorders n=4", "_preorder_rows_jit", _kernels._preorder_rows_numpy, (4,)),
    ("preorders n=5", "_preorder_rows_jit", _kernels._preorder_rows_numpy, (5,)),
    ("families  n=3", "_closed_family_masks_jit", _kernels._closed_family_masks_numpy, (3,)),
    ("families  n=4", "_closed_family_masks_jit", _kernels._closed_family_masks_numpy, (4,)),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"numba available and enabled: {_kernels.USING_NUMBA}")
    header = f"{'case':<16} {'numpy':>12} {'numba':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, jit_attr, numpy_fn, fnargs in CASES:
        t_numpy = time_callable(numpy_fn, *fnargs, repeat=args.repeat)
        if _kernels.USING_NUMBA:
            jit_fn = getattr(_kernels, jit_attr)
            assert np.array_equal(jit_fn(*fnargs), numpy_fn(*fnargs))
            t_jit = time_callable(jit_fn, *fnargs, repeat=args.repeat)
            print(f"{name:<16} {t_numpy * 1e3:>10.2f}ms {t_jit * 1e3:>10.2f}ms "
                  f"{t_numpy / t_jit:>8.1f}x")
        else:
            print(f"{name:<16} {t_numpy * 1e3:>10.2f}ms {'n/a':>12} {'':>9}")


if __name__ == "__main__":
    main()
