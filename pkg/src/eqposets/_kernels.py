"""Hot loops over prime fields, compiled with numba when available.

Set ``EQP_NUMBA=0`` to force the pure-numpy implementations.  Both
backends are exact and return identical results; ``benchmarks/`` times
them against each other.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_BACKEND = "numba" if HAS_NUMBA and os.environ.get("EQP_NUMBA", "1") != "0" else "numpy"


def backend() -> str:
    return _BACKEND


def set_backend(name: str) -> None:
    global _BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba is not installed")
    _BACKEND = name


def inverse_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = pow(a, p - 2, p)
    return t


# --------------------------------------------------------------------------
# numpy implementations

def _rref_np(A, p, inv):
    R = np.mod(A, p).astype(np.int64, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * inv[R[r, c]]) % p
        f = R[:, c].copy()
        f[r] = 0
        if f.any():
            R -= np.outer(f, R[r])
            np.mod(R, p, out=R)
        pivots.append(c)
        r += 1
    return R, r, np.array(pivots, dtype=np.int64)


def _digits(start, count, k, p):
    idx = np.arange(start, start + count, dtype=np.int64)
    out = np.empty((count, k), dtype=np.int64)
    for i in range(k):
        out[:, i] = idx % p
        idx //= p
    return out


def _batched_invertible(M, p, inv):
    A = M.copy()
    N, m, _ = A.shape
    alive = np.ones(N, dtype=bool)
    rows = np.arange(N)
    for c in range(m):
        nz = A[:, c:, c] != 0
        has = nz.any(axis=1)
        alive &= has
        piv = c + np.argmax(nz, axis=1)
        top = A[rows, c].copy()
        A[rows, c] = A[rows, piv]
        A[rows, piv] = top
        scale = inv[A[:, c, c]]
        A[:, c] = (A[:, c] * scale[:, None]) % p
        if c + 1 < m:
            f = A[:, c + 1:, c]
            A[:, c + 1:] = (A[:, c + 1:] - f[:, :, None] * A[:, c][:, None, :]) % p
    return alive


def _search_np(B, p, inv, mode, chunk=1 << 15):
    k, m, _ = B.shape
    total = p ** k
    eye = np.eye(m, dtype=np.int64)
    flat = B.reshape(k, m * m)
    for start in range(0, total, chunk):
        cnt = min(chunk, total - start)
        C = _digits(start, cnt, k, p)
        M = ((C @ flat) % p).reshape(cnt, m, m)
        if mode == 0:
            sq = np.einsum("nij,njk->nik", M, M) % p
            ok = (sq == M).all(axis=(1, 2))
            ok &= M.any(axis=(1, 2))
            ok &= ~(M == eye).all(axis=(1, 2))
        else:
            ok = _batched_invertible(M, p, inv)
        hit = np.nonzero(ok)[0]
        if hit.size:
            return C[hit[0]]
    return None


# --------------------------------------------------------------------------
# numba implementations

if HAS_NUMBA:

    @njit(cache=True)
    def _rref_nb(A, p, inv):
        R = A.copy()
        rows, cols = R.shape
        for i in range(rows):
            for j in range(cols):
                R[i, j] %= p
        piv = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = -1
            for i in range(r, rows):
                if R[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(cols):
                    t = R[r, j]
                    R[r, j] = R[k, j]
                    R[k, j] = t
            s = inv[R[r, c]]
            for j in range(cols):
                R[r, j] = (R[r, j] * s) % p
            for i in range(rows):
                if i != r and R[i, c] != 0:
                    f = R[i, c]
                    for j in range(cols):
                        R[i, j] = (R[i, j] - f * R[r, j]) % p
            piv[r] = c
            r += 1
        return R, r, piv[:r].copy()

    @njit(cache=True)
    def _is_idempotent_nb(M, p):
        m = M.shape[0]
        nonzero = False
        ident = True
        for i in range(m):
            for j in range(m):
                v = M[i, j]
                if v != 0:
                    nonzero = True
                if v != (1 if i == j else 0):
                    ident = False
        if not nonzero or ident:
            return False
        for i in range(m):
            for j in range(m):
                s = 0
                for l in range(m):
                    s += M[i, l] * M[l, j]
                if s % p != M[i, j]:
                    return False
        return True

    @njit(cache=True)
    def _is_invertible_nb(M, p, inv, work):
        m = M.shape[0]
        for i in range(m):
            for j in range(m):
                work[i, j] = M[i, j]
        for c in range(m):
            k = -1
            for i in range(c, m):
                if work[i, c] != 0:
                    k = i
                    break
            if k < 0:
                return False
            if k != c:
                for j in range(m):
                    t = work[c, j]
                    work[c, j] = work[k, j]
                    work[k, j] = t
            s = inv[work[c, c]]
            for i in range(c + 1, m):
                if work[i, c] != 0:
                    f = (work[i, c] * s) % p
                    for j in range(c, m):
                        work[i, j] = (work[i, j] - f * work[c, j]) % p
        return True

    @njit(cache=True)
    def _search_nb(B, p, inv, mode):
        k, m, _ = B.shape
        M = np.zeros((m, m), dtype=np.int64)
        digits = np.zeros(k, dtype=np.int64)
        work = np.zeros((m, m), dtype=np.int64)
        while True:
            if mode == 0:
                if _is_idempotent_nb(M, p):
                    return digits
            else:
                if _is_invertible_nb(M, p, inv, work):
                    return digits
            # odometer step: bumping digit i always adds B[i]
            i = 0
            while i < k:
                digits[i] += 1
                for a in range(m):
                    for b in range(m):
                        M[a, b] = (M[a, b] + B[i, a, b]) % p
                if digits[i] < p:
                    break
                digits[i] = 0
                i += 1
            if i == k:
                return np.full(0, -1, dtype=np.int64)


# --------------------------------------------------------------------------
# dispatch

def rref_mod_p(A: np.ndarray, p: int, inv: np.ndarray):
    """Reduced row echelon form mod p: (R, rank, pivot columns)."""
    A = np.ascontiguousarray(A, dtype=np.int64)
    if A.size == 0:
        return A.copy(), 0, np.zeros(0, dtype=np.int64)
    if _BACKEND == "numba":
        return _rref_nb(A, p, inv)
    return _rref_np(A, p, inv)


def _search(B, p, inv, mode):
    B = np.ascontiguousarray(np.mod(B, p), dtype=np.int64)
    k = B.shape[0]
    if k == 0:
        return None
    if _BACKEND == "numba":
        r = _search_nb(B, p, inv, mode)
        return None if r.size == 0 else r
    return _search_np(B, p, inv, mode)


def find_idempotent(B: np.ndarray, p: int, inv: np.ndarray):
    """Coefficients of a nontrivial idempotent in span(B) (k, m, m), or None."""
    return _search(B, p, inv, 0)


def find_invertible(B: np.ndarray, p: int, inv: np.ndarray):
    """Coefficients of an invertible element of span(B), or None."""
    return _search(B, p, inv, 1)
