#!/usr/bin/env python3
"""Benchmark the compiled descent kernel against the pure-Python twin.

Also re-checks the twin contract: both backends must return bit-identical
roots and values on every workload.

Usage:
  python benchmarks/bench_search.py [--restarts 64] [--repeats 3] [--seed 0]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from soscert import _descent_py
from soscert.laurentk import _float_weights

try:
    from soscert import _descent
except ImportError:
    _descent = None

WORKLOADS = [(6, 3), (9, 5), (12, 7), (12, 11), (16, 9)]


def _time(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--restarts", type=int, default=64)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _descent is None:
        print("compiled kernel not built; benchmarking python twin only")

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>4} {'t':>4} {'restarts':>9} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for n, t in WORKLOADS:
        starts = rng.uniform(1.0, float(n), size=(args.restarts, t))
        kernel_args = (starts, n, _float_weights(n), (n - 1) / 2.0, 0.5, 1e-7, 20000)
        py_s = _time(_descent_py.descend_batch, kernel_args, args.repeats)
        if _descent is None:
            print(f"{n:>4} {t:>4} {args.restarts:>9} {py_s:>9.3f}s {'-':>10} {'-':>8}")
            continue
        c_s = _time(_descent.descend_batch, kernel_args, args.repeats)
        rc, vc = _descent.descend_batch(*kernel_args)
        rp, vp = _descent_py.descend_batch(*kernel_args)
        identical = np.array_equal(rc, rp) and np.array_equal(vc, vp)
        print(
            f"{n:>4} {t:>4} {args.restarts:>9} {py_s:>9.3f}s {c_s:>9.3f}s "
            f"{py_s / c_s:>7.1f}x  bit-identical={identical}"
        )
        if not identical:
            print("ERROR: backends diverged")
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
