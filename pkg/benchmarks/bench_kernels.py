"""Time the hot kernels under the compiled and the numpy backend.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--size N]
"""

import argparse
import timeit

import numpy as np

from shiftdeconv import (ImageRaster, blur_axis, deblur_axis, kernels,
                         make_gaussian_kernel)
from shiftdeconv.combined import build_shift_matrix, make_combination


def cases(size, rng):
    lines = rng.random((size, size))
    s = rng.random(13) + 0.1
    s_dom = np.r_[1.0, 0.5 * rng.random(12) / 12]
    gauss = make_gaussian_kernel(2.0, 6)
    comb = make_combination(gauss, size // 8)
    sigma = build_shift_matrix(gauss, 6, 40).entries
    e = np.zeros(81)
    e[40] = 1.0
    img = ImageRaster(rng.random((size, size, 3)))
    blurred = blur_axis(img, gauss, "x")
    return {
        "convolve_rows": lambda: kernels.convolve_rows(lines, s),
        "shift_add_rows": lambda: kernels.shift_add_rows(lines.copy(), 7, 0.5),
        "step_iterate": lambda: kernels.step_iterate(
            np.r_[s_dom, np.zeros(size // 2 - 13)], lines[:, :size // 2].copy(), 1e6),
        "combine_rows": lambda: kernels.combine_rows(lines, comb.mu, comb.L, comb.C, size - 12),
        "solve_transposed(81)": lambda: kernels.solve_transposed(sigma, e),
        "deblur_axis combined": lambda: deblur_axis(blurred, gauss, "x", "combined"),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--size", type=int, default=256)
    args = p.parse_args()
    names = kernels.available_backends()
    print(f"lines {args.size}x{args.size}, best of {args.repeat}; backends: {', '.join(names)}")
    timings = {}
    for name in names:
        previous = kernels.use_backend(name)
        try:
            for label, fn in cases(args.size, np.random.default_rng(0)).items():
                fn()
                best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
                timings.setdefault(label, {})[name] = best
        finally:
            kernels.use_backend(previous)
    header = f"{'kernel':<24}" + "".join(f"{n:>12}" for n in names)
    both = {"python", "cython"} <= set(names)
    if both:
        header += f"{'speedup':>10}"
    print(header)
    for label, row in timings.items():
        line = f"{label:<24}" + "".join(f"{row[n] * 1e3:>10.3f}ms" for n in names)
        if both:
            line += f"{row['python'] / row['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
