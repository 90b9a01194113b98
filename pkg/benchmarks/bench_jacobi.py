"""Time the Jacobi eigensolver with the numba kernel and the numpy fallback.

    python benchmarks/bench_jacobi.py --dims 32,64,128 --repeat 3

The numba column is skipped when numba is missing or
``WEYLKIN_DISABLE_NUMBA`` is set.  LAPACK (``numpy.linalg.eigh``) is listed
for scale only.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from weylkin._accel import HAVE_NUMBA
from weylkin.linalg import hermitian_eigen


def best_of(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", default="32,64,128")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    if HAVE_NUMBA:
        # compile outside the timed region
        hermitian_eigen(np.diag([1.0, 2.0]) + 0.1, use_numba=True)

    print(f"{'dim':>5} {'numpy s':>10} {'numba s':>10} {'speedup':>8} {'lapack s':>10} {'agree':>8}")
    for dim in (int(d) for d in args.dims.split(",")):
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        h = a + a.conj().T
        t_np = best_of(lambda: hermitian_eigen(h, use_numba=False), args.repeat)
        t_lapack = best_of(lambda: np.linalg.eigh(h), args.repeat)
        ref, _ = hermitian_eigen(h, use_numba=False)
        if HAVE_NUMBA:
            t_nb = best_of(lambda: hermitian_eigen(h, use_numba=True), args.repeat)
            got, _ = hermitian_eigen(h, use_numba=True)
            agree = float(np.abs(got - ref).max())
            print(f"{dim:5d} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f} {t_lapack:10.4f} {agree:8.1e}")
        else:
            print(f"{dim:5d} {t_np:10.4f} {'-':>10} {'-':>8} {t_lapack:10.4f} {'-':>8}")


if __name__ == "__main__":
    main()
