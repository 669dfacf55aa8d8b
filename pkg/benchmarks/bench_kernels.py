"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py --sizes 100 1000 10000
"""

import argparse
import time

import numpy as np

from helix_steiner import kernels
from helix_steiner.helix import HelixParams, helix_points
from helix_steiner.srf import critical_point


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench(mod, n, params, sweeps, repeat):
    T = np.ascontiguousarray(helix_points(range(n), params))
    S0 = np.ascontiguousarray(T[1:-1] * np.array([0.9, 0.9, 1.0]))
    flags = np.zeros(n - 2, dtype=np.uint8)

    def run_sweeps():
        S = S0.copy()
        for _ in range(sweeps):
            mod.sweep(T, S, flags)

    return {
        "sweep": best_of(run_sweeps, repeat) / sweeps,
        "mst": best_of(lambda: mod.mst_length(T), repeat),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 1000, 5000])
    ap.add_argument("--sweeps", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cp = critical_point()
    params = HelixParams(cp.omega_R, cp.a_R)
    backends = kernels.available_backends()
    print(f"selected backend: {kernels.BACKEND}; available: {', '.join(sorted(backends))}")
    print(f"{'n':>7} {'kernel':>6} " + " ".join(f"{b:>12}" for b in sorted(backends)) + "  speedup")
    for n in args.sizes:
        res = {b: bench(backends[b], n, params, args.sweeps, args.repeat) for b in sorted(backends)}
        for k in ("sweep", "mst"):
            row = " ".join(f"{res[b][k] * 1e3:10.3f}ms" for b in sorted(backends))
            speed = ""
            if "cython" in res:
                speed = f"{res['python'][k] / res['cython'][k]:7.1f}x"
            print(f"{n:>7} {k:>6} {row}  {speed}")


if __name__ == "__main__":
    main()
