"""Compiled (numba) versus fallback timings for the three hot kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat 3]
The compiled path is warmed up once so compile time is reported separately.
"""
import argparse
import time

import numpy as np

from loopkit import enumerate as en
from loopkit import kernels
from loopkit.core import cyclic_group
from loopkit.subloops import make_special


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    tables6 = np.concatenate(list(en.enumerate_tables(6)))
    GH = make_special(cyclic_group(7), range(7))
    L = GH.loop

    cases = {
        "latin count, order 6": lambda c: kernels.count_latin(6, compiled=c),
        "autotopism core FULL, Z7": lambda c: len(kernels.autotopism_core(
            L.T, L.ldiv, L.rdiv, GH.mask, GH.H, L.identity, kernels.KIND_CODES["FULL"],
            compiled=c)),
        "s2bl scan, 9408 order-6 tables": lambda c: len(kernels.s2bl_scan(tables6, 6, compiled=c)[0]),
    }
    print(f"{'kernel':36s} {'compile+1st':>12s} {'numba':>10s} {'fallback':>10s} {'speedup':>8s}")
    for name, fn in cases.items():
        t0 = time.perf_counter()
        fn(True)
        warm = time.perf_counter() - t0
        fast, a = best_of(lambda: fn(True), args.repeat)
        slow, b = best_of(lambda: fn(False), args.repeat)
        assert a == b, (name, a, b)
        print(f"{name:36s} {warm:11.3f}s {fast:9.4f}s {slow:9.4f}s {slow / fast:7.1f}x")


if __name__ == "__main__":
    main()
