"""Compare the numba kernels with their numpy fallbacks.

Usage::

    python benchmarks/bench_kernels.py [--max-d 9] [--repeat 3]

Timings are best-of-``repeat`` wall times after one warm-up call (which
triggers JIT compilation on the numba side).
"""

import argparse
import time

import numpy as np

from gconc import _kernels


def best_time(fn, repeat):
    fn()  # warm-up / compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-d", type=int, default=9)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'d':>3}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>9}{'rel diff':>11}")
    for d in range(5, args.max_d + 1):
        P = rng.random((d, d))
        t_np = best_time(lambda: _kernels.perm_root_sum_numpy(P), args.repeat)
        t_nb = best_time(lambda: _kernels.perm_root_sum_numba(P), args.repeat)
        a, b = _kernels.perm_root_sum_numpy(P), _kernels.perm_root_sum_numba(P)
        print(f"{'perm_root_sum':<16}{d:>3}{t_np:>12.4g}{t_nb:>12.4g}{t_np / t_nb:>9.1f}{abs(a - b) / abs(a):>11.1e}")

    for d in (4, 8, 16):
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        M = G @ G.conj().T
        v0 = np.exp(2j * np.pi * rng.random(d))
        t_np = best_time(lambda: _kernels.phase_ascent_numpy(M, v0, 1e-12, 10_000), args.repeat)
        t_nb = best_time(lambda: _kernels.phase_ascent_numba(M, v0, 1e-12, 10_000), args.repeat)
        a = _kernels.phase_ascent_numpy(M, v0, 1e-12, 10_000)[1]
        b = _kernels.phase_ascent_numba(M, v0, 1e-12, 10_000)[1]
        print(f"{'phase_ascent':<16}{d:>3}{t_np:>12.4g}{t_nb:>12.4g}{t_np / t_nb:>9.1f}{abs(a - b) / abs(a):>11.1e}")


if __name__ == "__main__":
    main()
