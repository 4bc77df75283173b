"""Compare the numba and pure-numpy Jacobi kernels.

    python benchmarks/bench_eigh.py            # kernel micro-benchmark + suite timing
    python benchmarks/bench_eigh.py --no-suite # kernels only

The suite timing runs ``tsallisop verify`` in subprocesses with and without
``TSALLISOP_DISABLE_NUMBA=1``, since the backend is fixed at import.
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from tsallisop import _accel, _kernels
from tsallisop.generators import random_spd


def bench_kernels(dims, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in dims:
        h = random_spd(n, 1e4, rng)
        cases = {"numpy": lambda: _kernels.jacobi_numpy(h, _kernels.MAX_SWEEPS)}
        if _accel.HAVE_NUMBA:
            _kernels.jacobi_numba(h, _kernels.MAX_SWEEPS)  # compile outside the timing
            cases["numba"] = lambda: _kernels.jacobi_numba(h, _kernels.MAX_SWEEPS)
        cases["lapack"] = lambda: np.linalg.eigh(h)
        for name, fn in cases.items():
            number, _ = timeit.Timer(fn).autorange()
            best = min(timeit.repeat(fn, number=number, repeat=repeat)) / number
            rows.append((n, name, best))
    return rows


def bench_suite(suite, trials):
    cmd = [sys.executable, "-m", "tsallisop", "verify", "--suite", suite, "--trials", str(trials)]
    out = {}
    for label, disable in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, TSALLISOP_DISABLE_NUMBA=disable)
        t0 = time.perf_counter()
        subprocess.run(cmd, env=env, check=False, stdout=subprocess.DEVNULL)
        out[label] = time.perf_counter() - t0
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 4, 8, 16])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--suite", default="theorem21")
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--no-suite", action="store_true")
    args = parser.parse_args()

    print(f"numba available: {_accel.HAVE_NUMBA}, active backend: {_accel.backend_name()}")
    print(f"{'n':>4} {'kernel':>8} {'time':>12}")
    for n, name, t in bench_kernels(args.dims, args.repeat):
        print(f"{n:>4} {name:>8} {t * 1e6:>10.1f}us")

    if not args.no_suite:
        times = bench_suite(args.suite, args.trials)
        print(f"\nverify --suite {args.suite} --trials {args.trials} (wall time incl. startup)")
        for label, t in times.items():
            print(f"  {label:>6}: {t:.2f}s")


if __name__ == "__main__":
    main()
