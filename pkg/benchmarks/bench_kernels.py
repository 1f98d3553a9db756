"""Time the hot kernels on both backends.

Run without arguments to benchmark numpy and numba side by side (each in its
own process, since the backend is frozen at import):

    python3 benchmarks/bench_kernels.py

or time a single backend in-process:

    GAUSSCAP_BACKEND=numpy python3 benchmarks/bench_kernels.py --backend numpy
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def best_of(fn, repeats=7):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def run_backend(size):
    from gausscap._kernels import BACKEND, entropy_g_arr, jacobi_sq_series, warmup
    from gausscap.ensembles import EnsembleSpec, spectral_density

    warmup()
    rng = np.random.default_rng(0)

    x = rng.uniform(0.0, 40.0, size=size)
    t_entropy = best_of(lambda: entropy_g_arr(x))

    inv_h = 1.0 / np.cumprod(np.full(40, 1.7))
    big = np.linspace(-1.0, 1.0, size // 10)
    small = np.linspace(-1.0, 1.0, 1001)   # a typical CLI density grid
    t_jacobi_big = best_of(lambda: jacobi_sq_series(big, 1.0, 2.0, inv_h))
    t_jacobi_small = best_of(lambda: jacobi_sq_series(small, 1.0, 2.0, inv_h),
                             repeats=200)

    density = spectral_density(EnsembleSpec(N=24, K=20, M=30))
    lam = np.linspace(0.0, 1.0, 1001)
    t_density = best_of(lambda: density(lam), repeats=200)

    print("backend=%s" % BACKEND)
    print("entropy_g_arr[%d]      %10.3f ms" % (size, 1e3 * t_entropy))
    print("jacobi_sq_series[%d]  %10.3f ms" % (size // 10, 1e3 * t_jacobi_big))
    print("jacobi_sq_series[%d]    %10.3f ms" % (1001, 1e3 * t_jacobi_small))
    print("spectral_density[%d]    %10.3f ms" % (1001, 1e3 * t_density))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--backend", choices=["numpy", "numba"],
                        help="time this backend in-process")
    parser.add_argument("--size", type=int, default=1_000_000,
                        help="elements in the entropy input array")
    args = parser.parse_args()

    if args.backend:
        os.environ["GAUSSCAP_BACKEND"] = args.backend
        run_backend(args.size)
        return

    for backend in ("numpy", "numba"):
        env = dict(os.environ, GAUSSCAP_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, __file__, "--backend", backend,
             "--size", str(args.size)],
            env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            print("backend=%s failed:\n%s" % (backend, proc.stderr.strip()))
            continue
        print(proc.stdout.strip())
        print()


if __name__ == "__main__":
    main()
