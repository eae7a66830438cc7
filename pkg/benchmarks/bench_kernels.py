"""Compare the numba and numpy prefilter kernels behind find_in_interval.

    python benchmarks/bench_kernels.py [--repeat 5]

Also times the exact least-height search end to end on intervals narrow
enough that the kernel scan dominates.
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from rxval import _kernels
from rxval.value_group import SQRT2, GroupScalar, ValueGroup, find_in_interval


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    lo = float(SQRT2) - 1
    hi = lo + 1e-7
    sizes = [10_000, 100_000, 1_000_000, 4_000_000]

    _kernels.scan_rational(0.1, 0.2, 1, 8)  # compile
    _kernels.scan_zsqrt2(0.1, 0.2, 0, 8)

    print(f"{'kernel':<10}{'n':>10}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, fn, start in (("rational", _kernels.scan_rational, 1), ("zsqrt2", _kernels.scan_zsqrt2, 0)):
        for n in sizes:
            times = {}
            results = {}
            for flag in (True, False):
                _kernels.USE_NUMBA = flag
                results[flag] = fn(lo, hi, start, start + n)
                times[flag] = best_of(lambda: fn(lo, hi, start, start + n), args.repeat)
            assert np.array_equal(np.sort(results[True]), np.sort(results[False]))
            print(f"{name:<10}{n:>10}{times[True] * 1e3:>12.2f}{times[False] * 1e3:>12.2f}{times[False] / times[True]:>10.1f}")

    print()
    print(f"{'search':<28}{'numba ms':>12}{'numpy ms':>12}")
    x = SQRT2 - 1
    for width in (Fraction(1, 10**5), Fraction(1, 10**7)):
        for g, method in ((ValueGroup.RATIONALS, "scan"), (ValueGroup.Z_PLUS_Z_SQRT2, "auto")):
            row = []
            for flag in (True, False):
                _kernels.USE_NUMBA = flag
                row.append(best_of(lambda: find_in_interval(x, x + GroupScalar(width), g, method=method), args.repeat))
            print(f"{g.value + ' w=' + str(width):<28}{row[0] * 1e3:>12.2f}{row[1] * 1e3:>12.2f}")
    _kernels.USE_NUMBA = True


if __name__ == "__main__":
    main()
