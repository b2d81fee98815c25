#!/usr/bin/env python3
"""Benchmark the compiled bilinear kernel against the numpy fallback.

Usage: python benchmarks/bench_resize.py [--repeats 20]
"""

import argparse
import time

import numpy as np

from pneumoscreen._kernels import KERNEL_BACKEND, _compiled, _fallback

CASES = [
    ("downsample 1024x1024 -> 310x310", (1024, 1024), (310, 310)),
    ("downsample 2048x1536 -> 310x310", (1536, 2048), (310, 310)),
    ("upsample    310x310 -> 1024x1024", (310, 310), (1024, 1024)),
    ("feature     310x310 -> 32x32", (310, 310), (32, 32)),
]


def timeit(fn, src, out_h, out_w, repeats):
    fn(src, out_h, out_w)  # warm up
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(src, out_h, out_w)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    print(f"active backend: {KERNEL_BACKEND}")
    if _compiled is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")

    rng = np.random.default_rng(0)
    header = f"{'case':<36} {'numpy':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, (h, w), (th, tw) in CASES:
        src = np.ascontiguousarray(rng.integers(0, 256, size=(h, w)).astype(np.uint8))
        numpy_s = timeit(_fallback.resize_bilinear, src, th, tw, args.repeats)
        if _compiled is not None:
            compiled_s = timeit(_compiled.resize_bilinear, src, th, tw, args.repeats)
            assert np.array_equal(
                _compiled.resize_bilinear(src, th, tw),
                _fallback.resize_bilinear(src, th, tw),
            ), "backends disagree"
            print(
                f"{name:<36} {numpy_s * 1e3:>8.2f}ms {compiled_s * 1e3:>8.2f}ms "
                f"{numpy_s / compiled_s:>7.1f}x"
            )
        else:
            print(f"{name:<36} {numpy_s * 1e3:>8.2f}ms {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
