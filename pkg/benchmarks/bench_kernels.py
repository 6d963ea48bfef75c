"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from purecode import kernels
from purecode.bell import BXOR_SOURCE, BXOR_TARGET


def _cuts(f):
    g = (1 - f) / 3
    return np.array([f, f + g, f + 2 * g])


WORKLOADS = {
    "block_entropy k=14": lambda m: m.block_entropy(14, 0.81),
    "block_entropy k=20": lambda m: m.block_entropy(20, 0.81),
    "block_entropy k=24": lambda m: m.block_entropy(24, 0.81),
    "sample_block k=4, 10^6 shots": lambda m: m.sample_block(4, _cuts(0.85), 10**6, 1, 0,
                                                             BXOR_SOURCE, BXOR_TARGET),
    "sample_code_block k=4, 10^6": lambda m: m.sample_code_block(4, _cuts(0.85), 10**6, 1, 0),
    "decode_scan n=10, m=14": lambda m: m.decode_scan(
        10, np.random.default_rng(0).integers(0, 1 << 20, 14).astype(np.uint64),
        np.zeros(14, dtype=np.int64), np.tile([0.95, 0.05 / 3, 0.05 / 3, 0.05 / 3], (10, 1))),
}


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    names = sorted(backends)
    print(f"{'kernel':<32}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, work in WORKLOADS.items():
        times = {n: best_time(lambda: work(backends[n]), args.repeat) for n in names}
        row = f"{label:<32}" + "".join(f"{times[n]:>11.4f}s" for n in names)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)
    if "cython" not in backends:
        print("compiled kernels not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
