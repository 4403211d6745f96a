"""Time the compiled and numpy kernel backends on the same workloads.

    python benchmarks/bench_kernels.py [--starts 2000] [--steps 64] [--repeat 5]

Prints one line per (workload, kernel) with the best wall time of each
backend and the speedup. Results of the two backends are compared too.
"""

import argparse
import time

import numpy as np

from conepf import kernels
from conepf.counterexample import build_example1
from conepf.cone import sample_points
from conepf.maps import ComposedMap, LinearMap, MinLinearMap


def workloads():
    rng = np.random.default_rng(0)
    A = rng.uniform(0.1, 1.0, size=(3, 3))
    B = rng.uniform(0.1, 1.0, size=(3, 3))
    yield "linear 3x3", LinearMap(np.round(A * 100).astype(int).tolist())
    yield "sector map 2d", build_example1()
    yield "min of 2 linear 3d", MinLinearMap([np.round(A * 100).astype(int).tolist(), np.round(B * 100).astype(int).tolist()])
    yield "composition", ComposedMap([build_example1(), LinearMap([[2, 1], [1, 2]])])


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--starts", type=int, default=2000)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    py = kernels.backend_module("python")
    try:
        cy = kernels.backend_module("cython")
    except ImportError:
        print("compiled backend not built; nothing to compare")
        return
    print(f"{'workload':22s} {'kernel':16s} {'cython [ms]':>12s} {'python [ms]':>12s} {'speedup':>8s}")
    for name, T in workloads():
        X = sample_points(T.cone, np.random.default_rng(1), args.starts)
        plan = T.plan
        cases = {
            "apply_batch": lambda impl: kernels.apply_batch(plan, X, 1e-9, impl=impl),
            "orbit_lognorms": lambda impl: kernels.orbit_lognorms(plan, X, args.steps, 1e-9, impl=impl)[0],
            "power_iterate": lambda impl: kernels.power_iterate(plan, X, 500, 1e-12, 1e-9, impl=impl)[2],
        }
        for kname, fn in cases.items():
            tc, rc = best_of(lambda: fn(cy), args.repeat)
            tp, rp = best_of(lambda: fn(py), args.repeat)
            finite = np.isfinite(rc) & np.isfinite(rp)
            agree = np.allclose(rc[finite], rp[finite], rtol=1e-9, atol=1e-12)
            flag = "" if agree else "  (results differ!)"
            print(f"{name:22s} {kname:16s} {tc * 1e3:12.3f} {tp * 1e3:12.3f} {tp / tc:8.1f}{flag}")


if __name__ == "__main__":
    main()
