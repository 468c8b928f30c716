#!/usr/bin/env python3
"""Benchmark: compiled pairwise-similarity kernel vs the pure-Python fallback.

The kernel dominates hypergraph construction (an all-pairs sweep over PR
file sets), so this is the number that decides whether building per
evaluation round is cheap. Usage:

    python benchmarks/bench_kernels.py [--sizes 100,300,600] [--repeats 3]
"""

import argparse
import random
import time

from hgrec.kernels import FilePack, _pairwise_py

try:
    from hgrec.kernels import _pairwise_cy
except ImportError:
    _pairwise_cy = None

PARTS = ["src", "lib", "net", "ui", "db", "core", "io", "a", "b", "c",
         "x.c", "y.c", "z.h", "m.md"]


def synthetic_pack(n_prs, files_per_pr=4, depth=4, seed=99):
    rng = random.Random(seed)
    sets = []
    for _ in range(n_prs):
        files = {
            "/".join(rng.choice(PARTS) for _ in range(rng.randint(2, depth + 1)))
            for _ in range(rng.randint(1, files_per_pr))
        }
        sets.append(sorted(files))
    return FilePack.from_file_sets(sets, "components")


def sweep(impl, pack):
    """One full all-pairs pass, row by row, like hypergraph construction."""
    total = 0.0
    for i in range(pack.n_sets):
        tokens, offsets = pack.slice_one(i)
        row = impl.mean_similarity_row(
            tokens, offsets, pack.tokens, pack.file_off, pack.set_off
        )
        total += float(row.sum())
    return total


def best_of(impl, pack, repeats):
    best = float("inf")
    checksum = None
    for _ in range(repeats):
        started = time.perf_counter()
        checksum = sweep(impl, pack)
        best = min(best, time.perf_counter() - started)
    return best, checksum


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="100,300,600")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'PRs':>6} {'python':>12} {'cython':>12} {'speedup':>9}")
    for size in sizes:
        pack = synthetic_pack(size)
        py_time, py_sum = best_of(_pairwise_py, pack, args.repeats)
        if _pairwise_cy is None:
            print(f"{size:>6} {py_time:>11.4f}s {'n/a':>12} {'n/a':>9}")
            continue
        cy_time, cy_sum = best_of(_pairwise_cy, pack, args.repeats)
        if abs(py_sum - cy_sum) > 1e-9 * max(1.0, abs(py_sum)):
            raise SystemExit(
                f"backend mismatch at {size} PRs: {py_sum!r} vs {cy_sum!r}"
            )
        print(
            f"{size:>6} {py_time:>11.4f}s {cy_time:>11.4f}s "
            f"{py_time / cy_time:>8.1f}x"
        )


if __name__ == "__main__":
    main()
