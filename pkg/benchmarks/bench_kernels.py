#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Run: python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from edgeworth import _kernels_py

try:
    from edgeworth import _kernels
    BACKENDS = [("cython", _kernels), ("python", _kernels_py)]
except ImportError:
    print("compiled backend not available; timing the fallback only")
    BACKENDS = [("python", _kernels_py)]

N_SCALAR = 200_000
N_ARRAY = 2_000_000


def bench_scalar(fn, args_iter):
    t0 = time.perf_counter()
    for args in args_iter:
        fn(*args)
    return time.perf_counter() - t0


def main():
    rng = np.random.default_rng(0)
    gamma_args = [(float(a), float(x))
                  for a, x in zip(rng.uniform(0.1, 5.0, N_SCALAR),
                                  rng.uniform(0.01, 50.0, N_SCALAR))]
    ts = [float(t) for t in rng.uniform(1e-6, 1.0, N_SCALAR)]
    xs_arr = np.ascontiguousarray(rng.uniform(-6, 6, N_ARRAY))
    out = np.empty_like(xs_arr)

    rows = []
    for name, mod in BACKENDS:
        t_gamma = bench_scalar(mod.gamma_upper_raw, gamma_args)
        t_psi = bench_scalar(mod.psi_abs, [(t,) for t in ts])
        t0 = time.perf_counter()
        mod.norm_cdf_array(xs_arr, out)
        t_arr = time.perf_counter() - t0
        rows.append((name, t_gamma, t_psi, t_arr))

    print(f"{'backend':8s} {'gamma_upper x200k':>18s} {'psi_abs x200k':>14s} "
          f"{'norm_cdf 2M-array':>18s}")
    for name, tg, tp, ta in rows:
        print(f"{name:8s} {tg:15.3f} s  {tp:11.3f} s  {ta:15.3f} s")
    if len(rows) == 2:
        print(f"{'speedup':8s} {rows[1][1] / rows[0][1]:15.1f} x  "
              f"{rows[1][2] / rows[0][2]:11.1f} x  "
              f"{rows[1][3] / rows[0][3]:15.1f} x")


if __name__ == "__main__":
    main()
