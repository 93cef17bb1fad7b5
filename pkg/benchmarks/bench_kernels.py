"""Compare the compiled and numpy trig-sum kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Workloads mirror the pipeline: the reference torus has 8 spinor frequencies,
about 30 surface modes and is sampled on an n x n grid with six derivative
orders.  Timings are best-of-repeat wall clock.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from diractori.kernels import DX, DXX, DXY, DY, DYY, VALUE, available_backends, trig_sum

ORDERS = (VALUE, DX, DY, DXX, DXY, DYY)


def workload(k: int, n: int, channels: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    nu = rng.integers(-4, 5, k) + 1j * rng.integers(-4, 5, k)
    coeffs = rng.normal(size=(k, channels)) + 1j * rng.normal(size=(k, channels))
    t = np.arange(n) / n * 2 * np.pi
    z = (t[:, None] + 1j * t[None, :]).ravel()
    return nu, coeffs, z


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = available_backends()
    cases = [("spinor 8 freq, 128^2, value", 8, 128, 2, (VALUE,)),
             ("surface 33 modes, 128^2, 6 orders", 33, 128, 2, ORDERS),
             ("surface 33 modes, 256^2, 6 orders", 33, 256, 2, ORDERS),
             ("form 33 modes, 512^2, value", 33, 512, 4, (VALUE,))]
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':40s}" + "".join(f"{b:>12s}" for b in backends) + "   max |diff|")
    for name, k, n, c, orders in cases:
        nu, coeffs, z = workload(k, n, c)
        times, results = [], []
        for b in backends:
            results.append(trig_sum(nu, coeffs, z, orders, backend=b))
            times.append(best_time(lambda: trig_sum(nu, coeffs, z, orders, backend=b), args.repeat))
        diff = max(float(np.max(np.abs(r - results[0]))) for r in results)
        print(f"{name:40s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + f"   {diff:.1e}")


if __name__ == "__main__":
    main()
