#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Times the AGM loop, the theta series, and an end-to-end derivative-field
evaluation, and reports the agreement between the two paths.  Run as

    python benchmarks/bench_kernels.py [--repeat N]

The active path for the end-to-end row follows GOLUZIN_LAB_NO_NUMBA, so
run once with and once without the flag to compare the full stack.
"""

import argparse
import time

import numpy as np

from goluzin_lab import _kernels
from goluzin_lab.elliptic import params_from_x0
from goluzin_lab.torus import GreenEvaluator, dzbar_Q_D


def timeit(fn, repeat):
    fn()  # warm up (jit compilation, caches)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_agm(repeat):
    ks = np.linspace(0.01, 0.99, 4000)

    def run_py():
        for k in ks:
            _kernels._agm_complete_py(float(k), -1.0)

    rows = [("agm (numpy/python)", timeit(run_py, repeat))]
    if _kernels.USE_NUMBA:

        def run_jit():
            for k in ks:
                _kernels._agm_complete_jit(float(k), -1.0)

        rows.append(("agm (numba)", timeit(run_jit, repeat)))
        vals = [
            abs(_kernels._agm_complete_jit(float(k), -1.0)[0] - _kernels._agm_complete_py(float(k), -1.0)[0])
            for k in ks[::97]
        ]
        rows.append(("agm max |diff|", max(vals)))
    return rows


def bench_theta(repeat):
    rng = np.random.default_rng(1)
    u = rng.uniform(-2, 2, 200_000) + 1j * rng.uniform(-0.5, 0.5, 200_000)
    h = params_from_x0(0.5).nome_h

    rows = [("theta series (numpy)", timeit(lambda: _kernels._theta_series_np(u, h, 1e-15, 64), repeat))]
    if _kernels.USE_NUMBA:
        rows.append(("theta series (numba)", timeit(lambda: _kernels._theta_series_jit(u, h, 1e-15, 64), repeat)))
        v1 = _kernels._theta_series_np(u[:5000], h, 1e-15, 64)[0]
        v2 = _kernels._theta_series_jit(u[:5000], h, 1e-15, 64)[0]
        rows.append(("theta max rel diff", float(np.max(np.abs(v1 - v2) / np.abs(v1)))))
    return rows


def bench_end_to_end(repeat):
    ev = GreenEvaluator.from_x0(0.5)
    p = ev.params
    rng = np.random.default_rng(2)
    z = rng.uniform(-2 * p.L, 2 * p.L, 20_000) + 1j * rng.uniform(-0.45 * p.L_prime, 0.45 * p.L_prime, 20_000)
    label = "numba" if _kernels.USE_NUMBA else "numpy fallback"
    return [(f"dzbar_Q_D field, 20k pts ({label})", timeit(lambda: dzbar_Q_D(ev, z), repeat))]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"active kernel path: {'numba' if _kernels.USE_NUMBA else 'numpy fallback'}")
    rows = bench_agm(args.repeat) + bench_theta(args.repeat) + bench_end_to_end(args.repeat)
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        if "diff" in name:
            print(f"{name:<{width}}  {value:.3e}")
        else:
            print(f"{name:<{width}}  {value * 1e3:9.3f} ms")


if __name__ == "__main__":
    main()
