"""Benchmark the compiled row-normal-form kernels against the pure-Python
fallback.

Both kernel modules export the same two entry points (``hnf_span_rows`` and
``snf_core``), so the comparison runs in a single process.  Matrix entries are
drawn to mimic the package's real workloads: small dense relation matrices
with entries that grow quickly under elimination.

Usage::

    python3 benchmarks/bench_normforms.py [--sizes 6,10,14] [--repeats 5]
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time

from cyclostark import _normpure

try:
    from cyclostark import _normcore
except ImportError:  # pragma: no cover - build without the extension
    _normcore = None


def random_matrix(rng: random.Random, rows: int, cols: int, spread: int) -> list[list[int]]:
    return [[rng.randint(-spread, spread) for _ in range(cols)] for _ in range(rows)]


def time_call(fn, mat, repeats: int) -> float:
    best = []
    for _ in range(repeats):
        work = [row[:] for row in mat]
        start = time.perf_counter()
        fn(work)
        best.append(time.perf_counter() - start)
    return statistics.median(best)


def run(sizes: list[int], repeats: int, seed: int) -> int:
    rng = random.Random(seed)
    if _normcore is None:
        print("compiled kernel not built; showing pure backend only")
    backends = [("pure", _normpure)] + ([("compiled", _normcore)] if _normcore else [])

    print(f"{'kernel':<14} {'shape':<10}", *(f"{name:>12}" for name, _ in backends),
          f"{'speedup':>9}" if _normcore else "", flush=True)
    cases = [("hnf_span_rows", n, (n, n + 2, 40)) for n in sizes] + \
            [("snf_core", n, (n, n, 25)) for n in sizes]
    for attr, n, (rows, cols, spread) in cases:
        mat = random_matrix(rng, rows, cols, spread)
        times = [time_call(getattr(mod, attr), mat, repeats) for _, mod in backends]
        row = [f"{attr:<14}", f"{rows}x{cols:<9}"]
        row += [f"{t * 1e3:10.3f}ms" for t in times]
        if len(times) == 2 and times[1] > 0:
            row.append(f"{times[0] / times[1]:8.2f}x")
        print(" ".join(row), flush=True)

    # sanity: both backends must agree exactly
    check = random_matrix(rng, 8, 10, 30)
    if _normcore is not None:
        assert _normpure.hnf_span_rows([r[:] for r in check]) == \
            _normcore.hnf_span_rows([r[:] for r in check]), "backend mismatch"
        sq = random_matrix(rng, 7, 7, 20)
        assert _normpure.snf_core([r[:] for r in sq])[0] == \
            _normcore.snf_core([r[:] for r in sq])[0], "backend mismatch"
        print("\nbackends agree on random spot checks")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="6,10,14,18",
                        help="comma-separated square sizes to benchmark")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed repetitions per case (median reported)")
    parser.add_argument("--seed", type=int, default=20240814)
    args = parser.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    return run(sizes, args.repeats, args.seed)


if __name__ == "__main__":
    sys.exit(main())
