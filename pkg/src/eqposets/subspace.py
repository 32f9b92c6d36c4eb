"""F-subspaces of G^n, stored through the 2n-dimensional F-realization."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import linalg
from .fields import Tower


class SubspaceError(ValueError):
    pass


@lru_cache(maxsize=256)
def _xi_block(tower: Tower, n: int) -> np.ndarray:
    """Realized multiplication by xi on column vectors of F^{2n}."""
    X = tower.F.zeros((2 * n, 2 * n))
    for i in range(n):
        X[2 * i:2 * i + 2, 2 * i:2 * i + 2] = tower.xi_mat
    return X


@lru_cache(maxsize=256)
def _pairing(tower: Tower, n: int) -> np.ndarray:
    """Gram matrix of the duality pairing: diag(1, q, 1, q, ...)."""
    D = tower.F.zeros((2 * n, 2 * n))
    for i in range(n):
        D[2 * i, 2 * i] = tower.F.elem(1)
        D[2 * i + 1, 2 * i + 1] = tower.q
    return D


class FSub:
    """An F-subspace of G^n in canonical echelon form."""

    __slots__ = ("tower", "n", "basis", "_key")

    def __init__(self, tower: Tower, n: int, rows=None, canonical: bool = False):
        self.tower = tower
        self.n = n
        if rows is None or len(rows) == 0:
            self.basis = tower.F.zeros((0, 2 * n))
        else:
            rows = np.asarray(rows)
            if rows.ndim != 2 or rows.shape[1] != 2 * n:
                raise SubspaceError(f"expected rows of length {2 * n}, got shape {rows.shape}")
            self.basis = rows if canonical else linalg.rref(rows, tower.F)[0]
        self._key = None

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, tower, n):
        return cls(tower, n)

    @classmethod
    def full(cls, tower, n):
        return cls(tower, n, tower.F.eye(2 * n), canonical=True)

    @classmethod
    def span(cls, tower: Tower, n: int, vectors, mode: str = "F") -> "FSub":
        """Span of G-vectors given as an array (k, n, 2) or list of (n, 2)."""
        vecs = np.asarray(vectors, dtype=tower.F.dtype) if len(vectors) else tower.F.zeros((0, n, 2))
        if vecs.ndim != 3 or vecs.shape[1:] != (n, 2):
            raise SubspaceError(f"vectors must have shape (k, {n}, 2)")
        rows = vecs.reshape(len(vecs), 2 * n)
        if mode == "G":
            rows = np.vstack([rows, tower.xi_times(rows)]) if len(rows) else rows
        elif mode != "F":
            raise SubspaceError("mode must be 'F' or 'G'")
        return cls(tower, n, rows)

    # basic data -----------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def g_dim(self) -> int:
        if not self.is_strong:
            raise SubspaceError("G-dimension of a non-strong subspace")
        return self.dim // 2

    def key(self):
        if self._key is None:
            self._key = (self.n, tuple(self.basis.ravel().tolist()))
        return self._key

    def __eq__(self, other):
        return isinstance(other, FSub) and self.tower == other.tower and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        from .fields import GElem, format_elem
        rows = []
        for r in self.basis:
            rows.append("(" + ", ".join(
                format_elem(GElem(self.tower, r[2 * i], r[2 * i + 1])) for i in range(self.n)) + ")")
        return f"FSub(n={self.n}, dim={self.dim}: {' '.join(rows)})"

    def vectors(self) -> np.ndarray:
        """Basis as G-vectors, shape (dim, n, 2)."""
        return self.basis.reshape(self.dim, self.n, 2)

    def _check(self, other):
        if other.n != self.n or other.tower != self.tower:
            raise SubspaceError("ambient mismatch")

    def _ann(self) -> np.ndarray:
        return linalg.nullspace(self.basis, self.tower.F) if self.dim else self.tower.F.eye(2 * self.n)

    # lattice -------------------------------------------------------------
    def __add__(self, other: "FSub") -> "FSub":
        self._check(other)
        if not other.dim:
            return self
        if not self.dim:
            return other
        return FSub(self.tower, self.n, np.vstack([self.basis, other.basis]))

    def __and__(self, other: "FSub") -> "FSub":
        self._check(other)
        if not self.dim or not other.dim:
            return FSub(self.tower, self.n)
        A = np.vstack([self._ann(), other._ann()])
        return FSub(self.tower, self.n, linalg.nullspace(A, self.tower.F))

    def contains(self, other: "FSub") -> bool:
        """other <= self."""
        self._check(other)
        if other.dim > self.dim:
            return False
        if not other.dim:
            return True
        return not np.any(linalg.matmul(other.basis, self._ann().T, self.tower.F) != 0)

    def __le__(self, other):
        return other.contains(self)

    def contains_vector(self, v: np.ndarray) -> bool:
        v = np.asarray(v).reshape(1, 2 * self.n)
        if not self.dim:
            return not np.any(v != 0)
        return not np.any(linalg.matmul(v, self._ann().T, self.tower.F) != 0)

    # hull / cohull --------------------------------------------------------
    @property
    def is_strong(self) -> bool:
        if not self.dim:
            return True
        if self.dim % 2:
            return False
        return self.contains(FSub(self.tower, self.n, self.tower.xi_times(self.basis)))

    def hull(self) -> "FSub":
        if not self.dim:
            return self
        return FSub(self.tower, self.n, np.vstack([self.basis, self.tower.xi_times(self.basis)]))

    def cohull(self) -> "FSub":
        if not self.dim:
            return self
        ann = self._ann()
        X = _xi_block(self.tower, self.n)
        A = np.vstack([ann, linalg.matmul(ann, X, self.tower.F)])
        return FSub(self.tower, self.n, linalg.nullspace(A, self.tower.F))

    # duality --------------------------------------------------------------
    def perp(self) -> "FSub":
        """Orthogonal complement under sum(u_i a_i + q u_i' b_i)."""
        if not self.dim:
            return FSub.full(self.tower, self.n)
        D = _pairing(self.tower, self.n)
        return FSub(self.tower, self.n, linalg.nullspace(linalg.matmul(self.basis, D, self.tower.F), self.tower.F))

    # maps -----------------------------------------------------------------
    def image(self, R: np.ndarray, m: int | None = None) -> "FSub":
        """Image under the realized F-matrix R (acting on columns)."""
        m = R.shape[0] // 2 if m is None else m
        if not self.dim:
            return FSub(self.tower, m)
        return FSub(self.tower, m, linalg.matmul(self.basis, R.T, self.tower.F))

    def g_basis(self) -> np.ndarray:
        """A G-basis (k, n, 2) of a strong subspace, drawn from the echelon rows."""
        if not self.is_strong:
            raise SubspaceError("G-basis of a non-strong subspace")
        return g_independent(self.tower, self.n, self.basis, FSub(self.tower, self.n))

    def quotient_basis(self, sub: "FSub", mode: str = "F") -> np.ndarray:
        """Echelon rows of self forming a basis of self/sub over F (or over G)."""
        if mode == "G":
            return g_independent(self.tower, self.n, self.basis, sub)
        chosen = []
        cur = sub
        for r in self.basis:
            if not cur.contains_vector(r):
                chosen.append(r)
                cur = cur + FSub(self.tower, self.n, r[None, :])
        if not chosen:
            return self.tower.F.zeros((0, self.n, 2))
        return np.array(chosen).reshape(len(chosen), self.n, 2)


def g_independent(tower: Tower, n: int, rows: np.ndarray, start: FSub) -> np.ndarray:
    """Greedily pick rows that are G-independent modulo the strong space ``start``."""
    chosen = []
    cur = start
    for r in rows:
        if not cur.contains_vector(r):
            chosen.append(r)
            cur = cur + FSub(tower, n, np.vstack([r[None, :], tower.xi_times(r[None, :])]))
    if not chosen:
        return tower.F.zeros((0, n, 2))
    return np.array(chosen).reshape(len(chosen), n, 2)


def span(tower, n, vectors, mode="F") -> FSub:
    return FSub.span(tower, n, vectors, mode)


def hull(U: FSub) -> FSub:
    return U.hull()


def cohull(U: FSub) -> FSub:
    return U.cohull()


def perp(U: FSub) -> FSub:
    return U.perp()


def lattice(opn: str, U: FSub, V: FSub):
    if opn == "sum":
        return U + V
    if opn == "intersect":
        return U & V
    if opn == "contains":
        return U.contains(V)
    if opn == "equal":
        U._check(V)
        return U == V
    raise SubspaceError(f"unknown lattice operation {opn!r}")


def all_subspaces(tower: Tower, n: int) -> list[FSub]:
    """Every F-subspace of G^n for a finite tower, sorted by (dim, basis)."""
    if not tower.finite:
        raise SubspaceError("all_subspaces needs a finite tower")
    import itertools
    F = tower.F
    m = 2 * n
    vecs = [np.array(v, dtype=np.int64) for v in itertools.product(range(F.p), repeat=m) if any(v)]
    seen = {FSub(tower, n).key(): FSub(tower, n)}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for U in frontier:
            for v in vecs:
                if U.contains_vector(v):
                    continue
                W = U + FSub(tower, n, v[None, :])
                k = W.key()
                if k not in seen:
                    seen[k] = W
                    nxt.append(W)
        frontier = nxt
    return sorted(seen.values(), key=lambda U: (U.dim, U.key()))
