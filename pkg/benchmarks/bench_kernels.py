"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--k 16]

Both backends must return identical answers; the script checks that first.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from eqposets import _kernels as K


def truncated_poly_algebra(k: int) -> np.ndarray:
    """Basis of F[t]/(t^k) as k x k shift powers: local, so no idempotent exists."""
    B = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        B[i] = np.eye(k, k=i, dtype=np.int64)
    return B


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--k", type=int, default=16, help="dimension of the local algebra searched exhaustively")
    ap.add_argument("--size", type=int, default=120, help="rref matrix size")
    a = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    cases = []
    for p in (2, 3):
        inv = K.inverse_table(p)
        A = rng.integers(0, p, size=(a.size, a.size + 7))
        cases.append((f"rref {a.size}x{a.size + 7} mod {p}", lambda A=A, p=p, inv=inv: K.rref_mod_p(A, p, inv)))
    inv2 = K.inverse_table(2)
    B = truncated_poly_algebra(a.k)
    cases.append((f"idempotent search k={a.k} mod 2 (2^{a.k} candidates)",
                  lambda: K.find_idempotent(B, 2, inv2)))

    print(f"{'case':55s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, fn in cases:
        K.set_backend("numpy")
        t_np, r_np = timed(fn, a.repeat)
        if not K.HAS_NUMBA:
            print(f"{name:55s} {t_np:10.4f} {'-':>10s}")
            continue
        K.set_backend("numba")
        fn()  # compile
        t_nb, r_nb = timed(fn, a.repeat)
        same = (r_np is None and r_nb is None) or all(
            np.array_equal(x, y) for x, y in zip(np.atleast_1d(r_np) if not isinstance(r_np, tuple) else r_np,
                                                 np.atleast_1d(r_nb) if not isinstance(r_nb, tuple) else r_nb))
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:55s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
