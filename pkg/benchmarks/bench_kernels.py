"""Compare the compiled coloring-histogram kernel with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Both kernels are checked for identical output before timing.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from cykit.kernels import compiled_histogram, python_histogram

# (label, group order n, matrix size); colorings = n ** size
CASES = [
    ("Z/2, 16x16", 2, 16),
    ("Z/4, 8x8", 4, 8),
    ("Z/8, 6x6", 8, 6),
    ("Z/8, 8x8", 8, 8),
    ("Z/5, 9x9", 5, 9),
]


def cyclic_tables(n: int) -> tuple[np.ndarray, np.ndarray, int]:
    a = np.arange(n, dtype=np.int64)
    M = 2 * n
    return (a * a) % M, (2 * np.outer(a, a)) % M, M


def random_form(rng: np.random.Generator, size: int, bound: int = 3) -> np.ndarray:
    q = rng.integers(-bound, bound + 1, size=(size, size))
    return np.triu(q) + np.triu(q, 1).T


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'case':<14}{'colorings':>12}{'python s':>11}{'compiled s':>12}{'speedup':>9}")
    speedups = []
    for label, n, size in CASES:
        t, b, M = cyclic_tables(n)
        q = random_form(rng, size) % M
        ref = python_histogram(q, t, b, M)
        tp = best_of(lambda: python_histogram(q, t, b, M), args.repeat)
        if compiled_histogram is None:
            print(f"{label:<14}{n ** size:>12}{tp:>11.4f}{'n/a':>12}{'':>9}")
            continue
        if not np.array_equal(np.asarray(compiled_histogram(q, t, b, M)), np.asarray(ref)):
            raise SystemExit(f"kernels disagree on {label}")
        tc = best_of(lambda: compiled_histogram(q, t, b, M), args.repeat)
        speedups.append(tp / tc)
        print(f"{label:<14}{n ** size:>12}{tp:>11.4f}{tc:>12.4f}{tp / tc:>8.1f}x")
    if speedups:
        print(f"median speedup {statistics.median(speedups):.1f}x")
    else:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()
