"""Benchmark the deflated-assembly kernels: compiled extension vs numpy fallback.

Times one full determinant-triple assembly (three compressed pair products)
per problem size, for complex matrices with m = n + 1.

Usage: python benchmarks/bench_kernels.py [--sizes 4,8,16,32,48] [--repeats 5]
"""

import argparse
import time

import numpy as np

from kronpencil import _pairdet_py

try:
    from kronpencil import _pairdet

    HAVE_COMPILED = True
except ImportError:
    _pairdet = None
    HAVE_COMPILED = False


def assemble(impl, mats):
    a0, a1, a2 = mats
    return (
        impl.pair_determinant(a1, a2),
        impl.pair_determinant(a2, a0),
        impl.pair_determinant(a0, a1),
    )


def time_impl(impl, mats, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = assemble(impl, mats)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="4,8,16,32,48",
                        help="comma-separated n values (m = n + 1)")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = np.random.default_rng(args.seed)
    print(f"compiled kernel available: {HAVE_COMPILED}")
    header = f"{'n':>4} {'m':>4} {'rows':>6} {'cols':>6} {'pure (ms)':>12}"
    if HAVE_COMPILED:
        header += f" {'compiled (ms)':>14} {'speedup':>9} {'max |diff|':>11}"
    print(header)
    for n in sizes:
        m = n + 1
        mats = tuple(
            np.ascontiguousarray(
                rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
            )
            for _ in range(3)
        )
        t_pure, out_pure = time_impl(_pairdet_py, mats, args.repeats)
        row = (f"{n:>4} {m:>4} {m*(m-1)//2:>6} {n*(n+1)//2:>6} "
               f"{1e3 * t_pure:>12.3f}")
        if HAVE_COMPILED:
            t_comp, out_comp = time_impl(_pairdet, mats, args.repeats)
            diff = max(
                float(np.abs(c - p).max()) for c, p in zip(out_comp, out_pure)
            )
            row += f" {1e3 * t_comp:>14.3f} {t_pure / t_comp:>8.1f}x {diff:>11.2e}"
        print(row)


if __name__ == "__main__":
    main()
