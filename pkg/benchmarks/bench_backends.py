"""Benchmark the numba and numpy backends on the hot contraction kernels.

Times kernel_table / double_contract / scalar_double_contract at
tiling-kernel-realistic sizes, plus an end-to-end double-contour kernel
evaluation, and prints a comparison table.

Usage:
    python3 benchmarks/bench_backends.py [--n 256] [--repeat 5]

Selection of the backend inside the package is controlled by the
CDSURFACE_BACKEND environment variable; this script bypasses that and
times both implementations directly.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cdsurface import _backend


def _timeit(fn, args, repeat):
    fn(*args)  # warm-up (numba compilation, cache effects)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _inputs(rng, n, r, depth):
    c = lambda *s: rng.standard_normal(s) + 1j * rng.standard_normal(s)
    return {
        "kernel_table": (c(depth, n, r, r), c(depth, n, r, r)),
        "double_contract": (c(n), c(n, r, r), c(n, n, r, r),
                            c(n, r, r), c(n)),
        "scalar_double_contract": (c(n), c(n, n), c(n)),
    }


def bench_primitives(n, r, depth, repeat):
    rng = np.random.default_rng(0)
    data = _inputs(rng, n, r, depth)
    pairs = {
        "kernel_table": (_backend.kernel_table,
                         _backend.kernel_table_numpy),
        "double_contract": (_backend.double_contract,
                            _backend.double_contract_numpy),
        "scalar_double_contract": (_backend.scalar_double_contract,
                                   _backend.scalar_double_contract_numpy),
    }
    rows = []
    for name, (fast, ref) in pairs.items():
        args = data[name]
        t_ref = _timeit(ref, args, repeat)
        if _backend.HAS_NUMBA:
            t_fast = _timeit(fast, args, repeat)
            np.testing.assert_allclose(fast(*args), ref(*args), atol=1e-10)
        else:
            t_fast = t_ref
        rows.append((name, t_fast, t_ref))
    return rows


def bench_end_to_end(n, repeat):
    from cdsurface import HexagonModel, KernelQuery
    from cdsurface import tiling

    model = HexagonModel(r=2, q=1, L=4, M=2, N=2,
                         a=((1.0, 0.7),), b=((1.2, 0.5),))
    query = KernelQuery(2, 0, 2, 1)

    def run():
        return tiling.dk_kernel(model, query, n)

    run()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        run()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=256,
                        help="quadrature nodes per contour")
    parser.add_argument("--r", type=int, default=2, help="matrix size")
    parser.add_argument("--depth", type=int, default=4,
                        help="summation depth for kernel_table")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"active backend: {_backend.BACKEND} "
          f"(numba available: {_backend.HAS_NUMBA})")
    print(f"sizes: n={args.n}, r={args.r}, depth={args.depth}, "
          f"best of {args.repeat}\n")

    rows = bench_primitives(args.n, args.r, args.depth, args.repeat)
    width = max(len(name) for name, _, _ in rows)
    print(f"{'primitive':<{width}}  {'active':>10}  {'numpy':>10}  speedup")
    for name, t_fast, t_ref in rows:
        speedup = t_ref / t_fast if t_fast > 0 else float("inf")
        print(f"{name:<{width}}  {t_fast * 1e3:>8.3f}ms  "
              f"{t_ref * 1e3:>8.3f}ms  {speedup:6.2f}x")

    t = bench_end_to_end(args.n, args.repeat)
    print(f"\nend-to-end tiling kernel evaluation "
          f"({_backend.BACKEND}): {t * 1e3:.3f}ms")


if __name__ == "__main__":
    main()
