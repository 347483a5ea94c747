#!/usr/bin/env python3
"""Benchmark the compiled sparse kernels against the numpy fallback.

The workload is the dominant cost of the verification suites: power
iteration for operator norms of the difference operators and their
(s, t)-factor tails.  Usage:

    python3 benchmarks/bench_kernels.py --caps 10 14 18 --repeats 3
"""

from __future__ import annotations

import argparse
import statistics
import time

from qsu2.equivalence import difference
from qsu2.kernels import have_extension
from qsu2.operator_core import TailProjector, power_norm, restrict_tail


def time_workload(op, tails, backend, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        power_norm(op, backend=backend)
        for m in tails:
            tail = restrict_tail(op, TailProjector("pi-factor", m))
            power_norm(tail, backend=backend)
        times.append(time.perf_counter() - t0)
    return min(times), statistics.mean(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--caps", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--q", type=float, default=0.5)
    args = ap.parse_args()

    backends = ["numpy"]
    if have_extension():
        backends.insert(0, "cython")
    else:
        print("note: compiled extension not built, timing the fallback only")

    header = f"{'cap':>4} {'dim':>6} {'nnz':>7}" + "".join(f" {b + ' (s)':>12}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for cap in args.caps:
        op = difference(args.q, cap, "alpha")
        tails = range(0, cap + 1, max(1, cap // 6))
        results = {}
        for b in backends:
            best, _ = time_workload(op, tails, b, args.repeats)
            results[b] = best
        row = f"{cap:>4} {len(op.domain):>6} {op.nnz:>7}"
        for b in backends:
            row += f" {results[b]:>12.4f}"
        if len(backends) == 2:
            row += f" {results['numpy'] / results['cython']:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
