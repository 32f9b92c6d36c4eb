"""Exact F-linear algebra on numpy arrays over a prime field or Q.

Rows are vectors throughout: a subspace is the row space of a matrix.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels


@lru_cache(maxsize=None)
def _inv_table(p: int) -> np.ndarray:
    return _kernels.inverse_table(p)


def _rref_q(A: np.ndarray):
    rows, cols = A.shape
    R = [[Fraction(x) for x in row] for row in A]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if k is None:
            continue
        R[r], R[k] = R[k], R[r]
        s = R[r][c]
        if s != 1:
            R[r] = [x / s for x in R[r]]
        pr = R[r]
        for i in range(rows):
            if i != r:
                f = R[i][c]
                if f != 0:
                    R[i] = [x - f * y for x, y in zip(R[i], pr)]
        pivots.append(c)
        r += 1
    out = np.empty((r, cols), dtype=object)
    for i in range(r):
        out[i, :] = R[i]
    return out, tuple(pivots)


def rref(A: np.ndarray, K):
    """Nonzero rows of the reduced echelon form and the pivot columns."""
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError("rref expects a matrix")
    if A.shape[0] == 0:
        return K.zeros((0, A.shape[1])), ()
    if K.finite:
        R, r, piv = _kernels.rref_mod_p(A, K.p, _inv_table(K.p))
        return R[:r].copy(), tuple(int(c) for c in piv)
    return _rref_q(A)


def rank(A: np.ndarray, K) -> int:
    return len(rref(A, K)[1])


def nullspace(A: np.ndarray, K) -> np.ndarray:
    """Rows spanning {v : A v = 0}."""
    A = np.asarray(A)
    n = A.shape[1]
    R, piv = rref(A, K)
    free = [c for c in range(n) if c not in piv]
    N = K.zeros((len(free), n))
    one = K.elem(1)
    for i, f in enumerate(free):
        N[i, f] = one
        for r, c in enumerate(piv):
            N[i, c] = K.norm(-R[r, f])
    return N


def left_kernel(A: np.ndarray, K) -> np.ndarray:
    """Rows y with y A = 0."""
    return nullspace(np.asarray(A).T, K)


def matmul(A, B, K):
    return K.norm(np.asarray(A) @ np.asarray(B))


def inverse(A: np.ndarray, K) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([np.asarray(A, dtype=K.dtype), K.eye(n)], axis=1)
    R, piv = rref(aug, K)
    if len(piv) < n or piv[:n] != tuple(range(n)):
        raise ZeroDivisionError("singular matrix")
    return R[:, n:].copy()


def mat_power(A, e: int, K):
    n = A.shape[0]
    out = K.eye(n)
    base = A
    while e:
        if e & 1:
            out = matmul(out, base, K)
        base = matmul(base, base, K)
        e >>= 1
    return out


def in_rowspace(v: np.ndarray, R: np.ndarray, K) -> bool:
    """Is v in the row space of the echelon matrix R?"""
    if R.shape[0] == 0:
        return not np.any(np.asarray(v) != 0)
    return rank(np.vstack([R, v]), K) == R.shape[0]


def extend_basis(R: np.ndarray, candidates: np.ndarray, K):
    """Indices of candidate rows that extend row space of R greedily."""
    chosen = []
    cur = R
    r = rank(cur, K) if cur.shape[0] else 0
    for i, v in enumerate(candidates):
        trial = np.vstack([cur, v[None, :]]) if cur.shape[0] else v[None, :]
        r2 = rank(trial, K)
        if r2 > r:
            chosen.append(i)
            cur, r = trial, r2
    return chosen
