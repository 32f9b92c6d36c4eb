"""Matrix corepresentations and their subspace form.

A corepresentation of an equipped poset P over F < G is a G-space
U0 = G^n with an F-subspace U_x for every point x such that x <= y gives
U_x <= U_y, x strong< y gives hull(U_x) <= U_y, and U_x is a G-subspace
whenever x is a strong point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .fields import GElem, Tower
from .poset import EquippedPoset, poset_iso
from .subspace import FSub
from .tits import DimVector


class CorepError(ValueError):
    pass


def _topo_order(P: EquippedPoset) -> list[int]:
    n = len(P)
    below = P.leq.sum(axis=0)
    return sorted(range(n), key=lambda i: (int(below[i]), i))


# --------------------------------------------------------------------------
# matrix form

class MatrixCorep:
    """A G-matrix with d0 rows split into one vertical stripe per point."""

    def __init__(self, poset: EquippedPoset, tower: Tower, d0: int, stripes: dict):
        self.poset = poset
        self.tower = tower
        self.d0 = d0
        self.stripes = {}
        for x in poset.ids:
            s = stripes.get(x)
            if s is None:
                s = tower.gzeros(d0, 0)
            s = np.asarray(s, dtype=tower.F.dtype)
            if s.ndim != 3 or s.shape[0] != d0 or s.shape[2] != 2:
                raise CorepError(f"stripe {x}: expected shape ({d0}, c, 2), got {s.shape}")
            self.stripes[x] = tower.F.norm(s)
        extra = set(stripes) - set(poset.ids)
        if extra:
            raise CorepError(f"stripes for unknown points {sorted(extra)}")

    @classmethod
    def from_rows(cls, poset, tower, widths: dict, rows) -> "MatrixCorep":
        """Build from full rows of entries (GElem/str/scalars) and stripe widths."""
        full = tower.garray(rows) if len(rows) else tower.gzeros(0, sum(widths.values()))
        d0 = full.shape[0]
        stripes, c = {}, 0
        for x in poset.ids:
            w = widths.get(x, 0)
            stripes[x] = full[:, c:c + w]
            c += w
        if c != full.shape[1]:
            raise CorepError(f"stripe widths sum to {c} but rows have {full.shape[1]} entries")
        return cls(poset, tower, d0, stripes)

    def widths(self) -> dict:
        return {x: self.stripes[x].shape[1] for x in self.poset.ids}

    def full(self) -> np.ndarray:
        parts = [self.stripes[x] for x in self.poset.ids]
        return np.concatenate(parts, axis=1) if parts else self.tower.gzeros(self.d0, 0)

    def dim_vector(self) -> DimVector:
        return DimVector.of(self.poset, self.d0, self.widths())

    def entry(self, x, i, j) -> GElem:
        return self.tower.entry(self.stripes[x], i, j)

    def __eq__(self, other):
        return (isinstance(other, MatrixCorep) and self.poset == other.poset and self.tower == other.tower
                and self.d0 == other.d0 and all(np.array_equal(self.stripes[x], other.stripes[x])
                                                for x in self.poset.ids))

    def __repr__(self):
        return f"MatrixCorep({self.poset.name}, d={self.dim_vector().compact()})"


# --------------------------------------------------------------------------
# subspace form

class CorepSpaces:
    def __init__(self, poset: EquippedPoset, tower: Tower, n: int, spaces: dict, check: bool = True):
        self.poset = poset
        self.tower = tower
        self.n = n
        self.spaces = {x: spaces.get(x, FSub(tower, n)) for x in poset.ids}
        if check:
            self.validate()

    def __getitem__(self, x) -> FSub:
        return self.spaces[x]

    def validate(self):
        P = self.poset
        for x in P.ids:
            U = self.spaces[x]
            if U.n != self.n or U.tower != self.tower:
                raise CorepError(f"space at {x} lives in the wrong ambient space")
            if P.is_strong_point(x) and not U.is_strong:
                raise CorepError(f"strong point {x} carries a non-strong subspace")
        for i, j in zip(*np.nonzero(P.leq)):
            if i == j:
                continue
            x, y = P.ids[i], P.ids[j]
            src = self.spaces[x].hull() if P.strong[i, j] else self.spaces[x]
            if not self.spaces[y].contains(src):
                kind = "hull(U_%s)" % x if P.strong[i, j] else "U_%s" % x
                raise CorepError(f"corepresentation condition fails: {kind} is not inside U_{y}")

    def key(self):
        return (self.poset.ids, self.n, tuple(self.spaces[x].key() for x in self.poset.ids))

    def __eq__(self, other):
        return isinstance(other, CorepSpaces) and self.tower == other.tower and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"CorepSpaces({self.poset.name}, n={self.n}, d={dim_vector(self).compact()})"


def spaces_of(M: MatrixCorep) -> CorepSpaces:
    P, T, n = M.poset, M.tower, M.d0
    out: dict = {}
    for i in _topo_order(P):
        x = P.ids[i]
        U = FSub.span(T, n, np.moveaxis(M.stripes[x], 1, 0), "G" if P.strong[i, i] else "F")
        for j in range(len(P)):
            if j != i and P.leq[j, i]:
                y = P.ids[j]
                U = U + (out[y].hull() if P.strong[j, i] else out[y])
        out[x] = U
    return CorepSpaces(P, T, n, out)


def radical(U: CorepSpaces, x) -> FSub:
    P = U.poset
    i = P.index(x)
    R = FSub(U.tower, U.n)
    for j in range(len(P)):
        if j != i and P.leq[j, i]:
            y = P.ids[j]
            R = R + (U.spaces[y].hull() if P.strong[j, i] else U.spaces[y])
    return R


def dim_vector(U) -> DimVector:
    if isinstance(U, MatrixCorep):
        return U.dim_vector()
    P = U.poset
    vals = {}
    for x in P.ids:
        q = U.spaces[x].dim - radical(U, x).dim
        vals[x] = q // 2 if P.is_strong_point(x) else q
    return DimVector.of(P, U.n, vals)


def is_reduced(M: MatrixCorep) -> bool:
    return dim_vector(spaces_of(M)) == M.dim_vector()


def matrix_of(U: CorepSpaces) -> MatrixCorep:
    P, T = U.poset, U.tower
    stripes = {}
    for x in P.ids:
        R = radical(U, x)
        reps = U.spaces[x].quotient_basis(R, "G" if P.is_strong_point(x) else "F")
        stripes[x] = np.moveaxis(reps, 0, 1) if len(reps) else T.gzeros(U.n, 0)
    return MatrixCorep(P, T, U.n, stripes)


def _check_same(U, V):
    if U.poset != V.poset:
        raise CorepError("corepresentations of different posets")
    if U.tower != V.tower:
        raise CorepError("corepresentations over different towers")


def direct_sum(M, N):
    _check_same(M, N)
    if isinstance(M, CorepSpaces):
        return direct_sum_spaces(M, N)
    T = M.tower
    stripes = {}
    for x in M.poset.ids:
        a, b = M.stripes[x], N.stripes[x]
        s = T.gzeros(M.d0 + N.d0, a.shape[1] + b.shape[1])
        s[:M.d0, :a.shape[1]] = a
        s[M.d0:, a.shape[1]:] = b
        stripes[x] = s
    return MatrixCorep(M.poset, T, M.d0 + N.d0, stripes)


def _embed(U: FSub, n_total: int, offset: int) -> FSub:
    T = U.tower
    rows = T.F.zeros((U.dim, 2 * n_total))
    rows[:, 2 * offset:2 * offset + 2 * U.n] = U.basis
    return FSub(T, n_total, rows, canonical=False)


def direct_sum_spaces(U: CorepSpaces, V: CorepSpaces) -> CorepSpaces:
    _check_same(U, V)
    n = U.n + V.n
    spaces = {x: _embed(U.spaces[x], n, 0) + _embed(V.spaces[x], n, U.n) for x in U.poset.ids}
    return CorepSpaces(U.poset, U.tower, n, spaces, check=False)


def zero_corep(P, tower) -> CorepSpaces:
    return CorepSpaces(P, tower, 0, {})


def trivial_corep(P, tower) -> CorepSpaces:
    return CorepSpaces(P, tower, 1, {})


def transform(U: CorepSpaces, R: np.ndarray, n: int | None = None) -> CorepSpaces:
    """Apply a realized invertible G-linear map to every space."""
    n = U.n if n is None else n
    return CorepSpaces(U.poset, U.tower, n, {x: S.image(R, n) for x, S in U.spaces.items()}, check=False)


# --------------------------------------------------------------------------
# morphisms

def _hom_system(U: CorepSpaces, V: CorepSpaces) -> np.ndarray:
    T = U.tower
    F = T.F
    n, m = U.n, V.n
    Mxi = T.xi_mat
    blocks = []
    for x in U.poset.ids:
        S, W = U.spaces[x], V.spaces[x]
        if not S.dim or W.dim == 2 * m:
            continue
        ann = linalg.nullspace(W.basis, F) if W.dim else F.eye(2 * m)
        a2 = ann.reshape(len(ann), m, 2)
        u2 = S.basis.reshape(S.dim, n, 2)
        uxi = F.norm(np.einsum("cd,rjd->rjc", Mxi, u2))
        re = np.einsum("sic,rjc->srij", a2, u2)
        im = np.einsum("sic,rjc->srij", a2, uxi)
        blocks.append(F.norm(np.stack([re, im], axis=-1).reshape(len(ann) * S.dim, m * n * 2)))
    if not blocks:
        return F.zeros((0, m * n * 2))
    return np.vstack(blocks)


def hom_basis(U: CorepSpaces, V: CorepSpaces) -> list:
    """F-basis of Hom(U, V) as G-matrices of shape (V.n, U.n, 2)."""
    _check_same(U, V)
    if U.n == 0 or V.n == 0:
        return []
    C = _hom_system(U, V)
    N = linalg.nullspace(C, U.tower.F) if C.shape[0] else U.tower.F.eye(C.shape[1])
    return [row.reshape(V.n, U.n, 2) for row in N]


def hom_realized(U: CorepSpaces, V: CorepSpaces) -> np.ndarray:
    """Hom basis as realized F-matrices, shape (k, 2 V.n, 2 U.n)."""
    H = hom_basis(U, V)
    T = U.tower
    if not H:
        return T.F.zeros((0, 2 * V.n, 2 * U.n))
    return np.stack([T.realize(h) for h in H])


def end_basis(U: CorepSpaces) -> np.ndarray:
    return hom_realized(U, U)


# --------------------------------------------------------------------------
# splitting

class UndecidedError(RuntimeError):
    """Raised when a ground-truth answer is required but out of reach."""


INDECOMPOSABLE = "indecomposable"
DECOMPOSABLE = "decomposable"
NO_SPLIT_FOUND = "no split found (Fitting-complete)"
UNDECIDED = "undecided"

EXHAUSTIVE_DIM_LIMIT = 24
EXHAUSTIVE_COUNT_LIMIT = 1 << 24


@dataclass
class Verdict:
    status: str
    method: str
    split: tuple | None = None  # (A, B) strong complementary subspaces

    @property
    def certain(self) -> bool:
        return self.status in (INDECOMPOSABLE, DECOMPOSABLE)


def _split_spaces(U: CorepSpaces, A: FSub, B: FSub):
    """Summands of U along U0 = A + B (both strong, each U_x compatible)."""
    T = U.tower
    ga, gb = A.g_basis(), B.g_basis()
    k = len(ga)
    cols = np.concatenate([ga, gb], axis=0)  # (n, n, 2): column vectors
    Pm = np.moveaxis(cols, 0, 1)
    Rinv = linalg.inverse(T.realize(Pm), T.F)
    left, right = {}, {}
    for x, S in U.spaces.items():
        sa = (S & A).image(Rinv, U.n)
        sb = (S & B).image(Rinv, U.n)
        if sa.dim + sb.dim != S.dim:
            raise CorepError("subspace is not compatible with the splitting")
        left[x] = FSub(T, k, sa.basis[:, :2 * k]) if sa.dim else FSub(T, k)
        right[x] = FSub(T, U.n - k, sb.basis[:, 2 * k:]) if sb.dim else FSub(T, U.n - k)
    return (CorepSpaces(U.poset, T, k, left, check=False),
            CorepSpaces(U.poset, T, U.n - k, right, check=False))


def _fitting(phi: np.ndarray, T: Tower):
    m = phi.shape[0]
    P = linalg.mat_power(phi, m, T.F)
    r = linalg.rank(P, T.F)
    if r in (0, m):
        return None
    n = m // 2
    im = FSub(T, n, P.T)
    ker = FSub(T, n, linalg.nullspace(P, T.F))
    return ker, im


def _fitting_split(U: CorepSpaces, E: np.ndarray):
    T = U.tower
    cands = list(E)
    if T.finite:
        eye = T.F.eye(2 * U.n)
        for h in E:
            for lam in range(1, T.F.p):
                cands.append(T.F.norm(h - lam * eye))
    for h in cands:
        s = _fitting(h, T)
        if s:
            return s
    for a, b in itertools.product(range(len(E)), repeat=2):
        s = _fitting(linalg.matmul(E[a], E[b], T.F), T)
        if s:
            return s
    return None


def _charpoly_factors(phi: np.ndarray, T: Tower):
    import sympy
    t = sympy.Symbol("t")
    M = sympy.Matrix(phi.tolist())
    cp = M.charpoly(t).as_expr()
    if T.finite:
        poly = sympy.Poly(cp, t, modulus=T.F.p)
    else:
        poly = sympy.Poly(cp, t, domain="QQ")
    _, facs = poly.factor_list()
    return [(sympy.Poly(g.as_expr(), t, domain="QQ").all_coeffs(), e) for g, e in facs]


def _poly_at(coeffs_high_first, phi, T: Tower):
    F = T.F
    m = phi.shape[0]
    out = F.zeros((m, m))
    eye = F.eye(m)
    for c in coeffs_high_first:
        out = F.norm(linalg.matmul(out, phi, F) + F.elem(c) * eye)
    return out


def _primary_split(U: CorepSpaces, phi: np.ndarray):
    T = U.tower
    facs = _charpoly_factors(phi, T)
    if len(facs) < 2:
        return None
    g, e = facs[0]
    m = phi.shape[0]
    Q = linalg.mat_power(_poly_at(g, phi, T), e, T.F)
    rest = T.F.eye(m)
    for h, f in facs[1:]:
        rest = linalg.matmul(rest, linalg.mat_power(_poly_at(h, phi, T), f, T.F), T.F)
    A = FSub(T, U.n, linalg.nullspace(Q, T.F))
    B = FSub(T, U.n, linalg.nullspace(rest, T.F))
    if A.dim in (0, m) or A.dim + B.dim != m:
        return None
    return A, B


def _coords_in_span(E_flat, M_flat, F):
    """Coefficients c with c @ E_flat = M_flat (E_flat rows independent)."""
    aug = np.vstack([E_flat, M_flat[None, :]]).T
    N = linalg.nullspace(aug, F)
    for row in N:
        if row[-1] != 0:
            s = -F.inv(row[-1])
            return F.norm(row[:-1] * s)
    raise CorepError("element outside the span")


def _local_certificate_q(F, E: np.ndarray):
    """Decide locality of an algebra spanned by E over Q via the trace radical."""
    import sympy
    from fractions import Fraction
    k = len(E)
    flat = E.reshape(k, -1)
    prods = [[linalg.matmul(E[i], E[j], F) for j in range(k)] for i in range(k)]
    tr = F.zeros((k, k))
    for i in range(k):
        for j in range(k):
            tr[i, j] = sum(prods[i][j][r, r] for r in range(E.shape[1]))
    J = linalg.nullspace(tr, F)
    s = k - len(J)
    if s == 1:
        return "local", None
    # quotient coordinates: complement of J inside F^k
    basisJ = J if len(J) else F.zeros((0, k))

    def in_J(c):
        if not len(basisJ):
            return not np.any(c != 0)
        return linalg.rank(np.vstack([basisJ, c[None, :]]), F) == linalg.rank(basisJ, F)

    for i in range(k):
        for j in range(i + 1, k):
            c = _coords_in_span(flat, F.norm(prods[i][j] - prods[j][i]).reshape(-1), F)
            if not in_J(c):
                if k == 4 and not len(J):
                    return _quaternion_certificate(E, F)
                return "noncommutative", None
    # try a few elements for a primitive element of A/J
    rng = np.random.default_rng(12345)
    trials = [np.eye(k, dtype=object)[i] for i in range(k)]
    trials += [rng.integers(-3, 4, size=k) for _ in range(6)]
    t = sympy.Symbol("t")
    for coeffs in trials:
        a = F.zeros(E.shape[1:])
        for ci, h in zip(coeffs, E):
            a = a + Fraction(int(ci)) * h
        pw = [F.eye(E.shape[1])]
        vecs = []
        for _ in range(s + 1):
            vecs.append(_coords_in_span(flat, pw[-1].reshape(-1), F))
            pw.append(linalg.matmul(pw[-1], a, F))
        # minimal polynomial of the image of a in A/J
        for deg in range(1, s + 1):
            rows = np.vstack([*vecs[:deg + 1], basisJ]) if len(basisJ) else np.vstack(vecs[:deg + 1])
            N = linalg.nullspace(rows.T, F)
            hit = [r for r in N if any(r[i] != 0 for i in range(deg + 1))]
            if hit:
                r = hit[0]
                poly = sympy.Poly([sympy.Rational(int(Fraction(r[i]).numerator), int(Fraction(r[i]).denominator))
                                   for i in range(deg, -1, -1)], t, domain="QQ")
                _, facs = poly.factor_list()
                if len(facs) > 1:
                    return "split", a
                if deg == s:
                    return "local", None
                break
    return "unknown", None


def _sq_free_int(x):
    """(squarefree integer, rational square factor) with x = s * r^2."""
    import sympy
    from fractions import Fraction
    x = Fraction(x)
    n = x.numerator * x.denominator
    core = 1 if n > 0 else -1
    for prime, e in sympy.factorint(abs(n)).items():
        if e % 2:
            core *= prime
    return core


def _quaternion_certificate(E: np.ndarray, F):
    """Locality of a 4-dimensional semisimple noncommutative algebra over Q.

    Such an algebra is a quaternion algebra (a, b); it is a division
    algebra, hence local, iff a y^2 + b z^2 = x^2 has only the zero
    solution.  On a split, returns a non-nilpotent zero divisor.
    """
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal
    import sympy
    from fractions import Fraction
    m = E.shape[1]
    eye = F.eye(m)
    flat = E.reshape(4, -1)

    def tr(h):
        return sum(h[r, r] for r in range(m))

    # pure (trace-zero) part
    traces = np.array([[tr(h)] for h in E], dtype=object)
    P = linalg.nullspace(traces.T, F)
    pure = [F.norm(np.tensordot(c, E, axes=1)) for c in P]
    i = next((h for h in pure if np.any(h != 0)), None)
    if i is None or len(pure) != 3:
        return "noncommutative", None
    ii = linalg.matmul(i, i, F)
    a = ii[0, 0]
    if np.any(F.norm(ii - a * eye) != 0):
        return "noncommutative", None
    # j: pure element anticommuting with i
    rows = []
    for h in pure:
        rows.append(F.norm(linalg.matmul(i, h, F) + linalg.matmul(h, i, F)).reshape(-1))
    N = linalg.nullspace(np.array(rows, dtype=object).T, F)
    if not len(N):
        return "noncommutative", None
    j = F.zeros((m, m))
    for c, h in zip(N[0], pure):
        j = j + c * h
    jj = linalg.matmul(j, j, F)
    b = jj[0, 0]
    if np.any(F.norm(jj - b * eye) != 0) or a == 0 or b == 0:
        return "noncommutative", None
    # x^2 = a y^2 + b z^2, solved over Z after clearing squares
    A, B = _sq_free_int(a), _sq_free_int(b)
    ra = sympy.sqrt(sympy.Rational(Fraction(a).numerator, Fraction(a).denominator) / A)
    rb = sympy.sqrt(sympy.Rational(Fraction(b).numerator, Fraction(b).denominator) / B)
    X, Y, Z = sympy.symbols("X Y Z", integer=True)
    sol = diop_ternary_quadratic_normal(A * Y**2 + B * Z**2 - X**2)
    if sol is None or sol[0] is None:
        return "local", None
    xs, ys, zs = sol
    # A y^2 = a (y/ra)^2 etc.
    vals = {X: xs, Y: ys, Z: zs}
    x = Fraction(int(vals[X]))
    y = Fraction(str(sympy.nsimplify(vals[Y] / ra)))
    z = Fraction(str(sympy.nsimplify(vals[Z] / rb)))
    w = F.norm(x * eye + y * i + z * j)
    if x != 0:
        return "split", w
    for h in E:
        wh = linalg.matmul(w, h, F)
        if tr(wh) != 0:
            return "split", wh
    return "noncommutative", None


def indecomposability(U: CorepSpaces, limit: int = EXHAUSTIVE_DIM_LIMIT) -> Verdict:
    """Decide whether U is indecomposable, recording the method used."""
    if U.n == 0:
        raise CorepError("the zero corepresentation has no indecomposability status")
    T = U.tower
    E = end_basis(U)
    k = len(E)
    if k == 1:
        return Verdict(INDECOMPOSABLE, "End = F")
    s = _fitting_split(U, E)
    if s:
        return Verdict(DECOMPOSABLE, "fitting", s)
    for h in E:
        s = _primary_split(U, h)
        if s:
            return Verdict(DECOMPOSABLE, "primary", s)
    if T.finite:
        if k <= limit and T.F.p ** k <= EXHAUSTIVE_COUNT_LIMIT:
            from . import _kernels
            c = _kernels.find_idempotent(E, T.F.p, linalg._inv_table(T.F.p))
            if c is None:
                return Verdict(INDECOMPOSABLE, "exhaustive")
            e = T.F.norm(np.tensordot(c, E, axes=1))
            A = FSub(T, U.n, linalg.nullspace(e, T.F))
            B = FSub(T, U.n, e.T)
            return Verdict(DECOMPOSABLE, "exhaustive", (A, B))
        return Verdict(UNDECIDED, f"dim End = {k} exceeds the exhaustive limit")
    status, a = _local_certificate_q(T.F, E)
    if status == "local":
        return Verdict(INDECOMPOSABLE, "trace radical")
    if status == "split":
        s = _fitting(a, T) or _primary_split(U, a)
        if s:
            return Verdict(DECOMPOSABLE, "primary", s)
    return Verdict(NO_SPLIT_FOUND, "fitting")


def algebra_is_local(E: np.ndarray, tower: Tower) -> bool | None:
    """Whether the unital algebra spanned by the matrices E has no idempotent but 0, 1.

    ``None`` when neither path can decide.
    """
    F = tower.F
    k = len(E)
    if k == 1:
        return True
    if tower.finite:
        if k <= EXHAUSTIVE_DIM_LIMIT and F.p ** k <= EXHAUSTIVE_COUNT_LIMIT:
            from . import _kernels
            return _kernels.find_idempotent(E, F.p, linalg._inv_table(F.p)) is None
        return None
    status, _ = _local_certificate_q(F, E)
    return {"local": True, "split": False}.get(status)


def is_indecomposable(U: CorepSpaces, strict: bool = True) -> bool:
    v = indecomposability(U)
    if v.status == INDECOMPOSABLE:
        return True
    if v.status == DECOMPOSABLE:
        return False
    if strict:
        raise UndecidedError(f"indecomposability undecided: {v.status}")
    return True


@dataclass
class Decomposition:
    summands: list
    methods: list
    undecided: int = 0

    @property
    def certified(self) -> bool:
        return self.undecided == 0


def decompose_report(U: CorepSpaces) -> Decomposition:
    out = Decomposition([], [])
    stack = [U]
    while stack:
        W = stack.pop()
        if W.n == 0:
            continue
        v = indecomposability(W)
        if v.status == DECOMPOSABLE:
            a, b = _split_spaces(W, *v.split)
            stack.extend([b, a])
            continue
        if not v.certain:
            out.undecided += 1
        out.summands.append(W)
        out.methods.append(v.method if v.certain else v.status)
    return out


def decompose(U: CorepSpaces) -> list:
    return decompose_report(U).summands


# --------------------------------------------------------------------------
# isomorphism

ISO_GRID_LIMIT = 20000


def _space_dims(U):
    return tuple(U.spaces[x].dim for x in U.poset.ids)


def are_isomorphic(U: CorepSpaces, V: CorepSpaces, _depth: int = 0) -> bool:
    _check_same(U, V)
    if U.n != V.n or _space_dims(U) != _space_dims(V) or dim_vector(U) != dim_vector(V):
        return False
    if U.n == 0:
        return True
    T = U.tower
    F = T.F
    H = hom_realized(U, V)
    k = len(H)
    if k == 0:
        return False
    m = 2 * U.n
    rng = np.random.default_rng(7)
    if T.finite:
        for _ in range(16):
            c = rng.integers(0, F.p, size=k)
            if linalg.rank(F.norm(np.tensordot(c, H, axes=1)), F) == m:
                return True
        if k <= EXHAUSTIVE_DIM_LIMIT and F.p ** k <= EXHAUSTIVE_COUNT_LIMIT:
            from . import _kernels
            return _kernels.find_invertible(H, F.p, linalg._inv_table(F.p)) is not None
    else:
        from fractions import Fraction
        for _ in range(8):
            c = rng.integers(-5, 6, size=k)
            M = F.zeros((m, m))
            for ci, h in zip(c, H):
                M = M + Fraction(int(ci)) * h
            if linalg.rank(M, F) == m:
                return True
        if (m + 1) ** k <= ISO_GRID_LIMIT:
            for c in itertools.product(range(m + 1), repeat=k):
                M = F.zeros((m, m))
                for ci, h in zip(c, H):
                    if ci:
                        M = M + Fraction(ci) * h
                if linalg.rank(M, F) == m:
                    return True
            return False
    if _depth > 2:
        raise UndecidedError("isomorphism test exceeds the enumeration bounds")
    du, dv = decompose_report(U), decompose_report(V)
    if not (du.certified and dv.certified):
        raise UndecidedError("isomorphism test needs certified decompositions")
    if len(du.summands) == 1 and len(dv.summands) == 1:
        raise UndecidedError("isomorphism of large indecomposables is out of reach")
    left = list(dv.summands)
    for S in du.summands:
        for i, W in enumerate(left):
            if are_isomorphic(S, W, _depth + 1):
                left.pop(i)
                break
        else:
            return False
    return not left


# --------------------------------------------------------------------------
# duality

def dual_corep(U: CorepSpaces) -> CorepSpaces:
    if not U.tower.duality_enabled:
        raise CorepError("duality needs p = 0 or characteristic 2")
    return CorepSpaces(U.poset.dual(), U.tower, U.n, {x: S.perp() for x, S in U.spaces.items()})


def sincere_dual_construction(U: CorepSpaces) -> CorepSpaces:
    """Swap U_x for its radical where the dual has zero coordinate, then dualize."""
    D = dual_corep(U)
    dd = dim_vector(D)
    spaces = {x: (radical(U, x) if dd[x] == 0 else S) for x, S in U.spaces.items()}
    return dual_corep(CorepSpaces(U.poset, U.tower, U.n, spaces))


# --------------------------------------------------------------------------
# extensions

def _is_full_subposet(Q: EquippedPoset, P: EquippedPoset) -> bool:
    if not set(Q.ids) <= set(P.ids):
        return False
    return P.subposet(list(Q.ids)) == EquippedPoset(P.name, Q.ids, Q.leq, Q.strong, check=False) or \
        (np.array_equal(P.subposet(list(Q.ids)).leq, Q.leq) and np.array_equal(P.subposet(list(Q.ids)).strong, Q.strong))


def extend_subposet(U: CorepSpaces, P: EquippedPoset) -> CorepSpaces:
    Q = U.poset
    if not _is_full_subposet(Q, P):
        raise CorepError(f"{Q.name} is not a full subposet of {P.name}")
    spaces = {}
    for x in P.ids:
        if x in U.spaces:
            spaces[x] = U.spaces[x]
            continue
        S = FSub(U.tower, U.n)
        for y in Q.ids:
            if P.lt(y, x):
                S = S + (U.spaces[y].hull() if P.is_strong_rel(y, x) else U.spaces[y])
        spaces[x] = S
    return CorepSpaces(P, U.tower, U.n, spaces)


def _first_outside(T, n, S: FSub, skip: int = 0):
    found = 0
    for i in range(n):
        v = T.F.zeros(2 * n)
        v[2 * i] = T.F.elem(1)
        if not S.contains_vector(v):
            if found == skip:
                return v
            found += 1
    if skip:
        # fall back to a sum of the first two outside vectors
        a = _first_outside(T, n, S, 0)
        for i in range(n):
            v = T.F.zeros(2 * n)
            v[2 * i] = T.F.elem(1)
            w = T.F.norm(a + v)
            if not np.array_equal(v, a) and not S.contains_vector(w):
                return w
    return None


def adjoin_point(U: CorepSpaces, P: EquippedPoset, zeta, side: str, choice: int = 0,
                 check_independence: bool = True) -> CorepSpaces:
    """Extend U (a corep of P minus zeta) by a strong extremal point zeta of P."""
    if zeta not in P.ids or not P.is_strong_point(zeta):
        raise CorepError(f"{zeta} must be a strong point of {P.name}")
    rest = [x for x in P.ids if x != zeta]
    if set(rest) != set(U.poset.ids):
        raise CorepError("U must be a corepresentation of P without zeta")
    T, n = U.tower, U.n
    if side == "top":
        if any(P.lt(zeta, y) for y in rest):
            raise CorepError(f"{zeta} is not maximal")
        R = [y for y in rest if P.lt(y, zeta)]
        H = FSub(T, n)
        for y in R:
            H = H + U.spaces[y]
        H = H.hull()
        if H.g_dim == n:
            raise CorepError("precondition hull(U_R) != U0 fails")
        v = _first_outside(T, n, H, choice)
        if v is None:
            raise CorepError("no alternative choice for U_zeta")
        Z = H + FSub(T, n, np.vstack([v[None, :], T.xi_times(v[None, :])]))
    elif side == "bottom":
        if any(P.lt(y, zeta) for y in rest):
            raise CorepError(f"{zeta} is not minimal")
        R = [y for y in rest if P.lt(zeta, y)]
        C = FSub.full(T, n)
        for y in R:
            C = C & U.spaces[y]
        C = C.cohull()
        if C.dim == 0:
            raise CorepError("precondition cohull(U_R) != 0 fails")
        gb = C.g_basis().reshape(-1, 2 * n)
        if choice >= len(gb):
            if len(gb) < 2 and choice:
                raise CorepError("no alternative choice for U_zeta")
        v = gb[choice] if choice < len(gb) else T.F.norm(gb[0] + gb[1])
        Z = FSub(T, n, np.vstack([v[None, :], T.xi_times(v[None, :])]))
    else:
        raise CorepError("side must be 'top' or 'bottom'")
    spaces = dict(U.spaces)
    spaces[zeta] = Z
    V = CorepSpaces(P, T, n, spaces)
    if check_independence and choice == 0:
        try:
            W = adjoin_point(U, P, zeta, side, choice=1, check_independence=False)
        except CorepError:
            W = None
        if W is not None and W != V and not are_isomorphic(V, W):
            raise CorepError("adjoined corepresentation depends on the choice of U_zeta")
    return V


# --------------------------------------------------------------------------
# misc invariants

def support_flags(U) -> tuple:
    d = dim_vector(U)
    supp = {x for x in d.ids if d[x] > 0}
    return supp, len(supp) == len(d.ids), d.d0 == 1


def r_vectors(W: CorepSpaces, anchors=("a", "p", "q", "theta")):
    from .poset import critical_posets
    a, p, q, th = anchors
    P = W.poset
    K7 = critical_posets()["K7"]
    sub = P.subposet([a, p, q, th])
    iso = poset_iso(sub, K7)
    if iso is None or iso != {a: "a", p: "p", q: "q", th: "theta"}:
        iso_ok = poset_iso(sub.relabel({a: "a", p: "p", q: "q", th: "theta"}), K7)
        if iso_ok is None or any(k != v for k, v in iso_ok.items()):
            raise CorepError("anchors do not induce a copy of K7")
    n = W.n
    Wa, Wp, Wq, Wt = (W.spaces[x] for x in (a, p, q, th))
    r = (n - Wq.hull().g_dim,
         n - (Wp.hull() + Wt).g_dim,
         2 * n - (Wq + Wt).dim,
         2 * n - (Wq + Wp.hull()).dim)
    rs = (Wa.cohull().g_dim,
          (Wp.cohull() & Wt).g_dim,
          (Wa & Wt).dim,
          (Wa & Wp.cohull()).dim)
    return r, rs


# --------------------------------------------------------------------------
# admissible transformations

class MoveError(CorepError):
    pass


def apply_transformation(M: MatrixCorep, move: tuple) -> MatrixCorep:
    """Apply one admissible move.

    Moves: ('row_swap', i, j), ('row_scale', i, g), ('row_add', src, dst, g),
    ('col_swap', x, i, j), ('col_scale', x, i, c), ('col_add', x, src, dst, c),
    ('cross_add', x, i, y, j, c) adding c * column i of stripe x to column j of y.
    """
    T, P = M.tower, M.poset
    stripes = {x: s.copy() for x, s in M.stripes.items()}
    kind = move[0]

    def scal(v):
        return T.coerce(v)

    def check_coef(c, strong: bool, what: str):
        if not strong and not c.in_base():
            raise MoveError(f"{what}: coefficient {c} must lie in F")

    def col(x, i):
        s = stripes[x][:, i]
        return [T.g(s[r, 0], s[r, 1]) for r in range(M.d0)]

    def set_col(x, i, vals):
        for r, z in enumerate(vals):
            stripes[x][r, i] = (z.re, z.im)

    if kind in ("row_swap", "row_scale", "row_add"):
        full = M.full()
        rows = [[T.entry(full, r, c) for c in range(full.shape[1])] for r in range(M.d0)]
        if kind == "row_swap":
            _, i, j = move
            rows[i], rows[j] = rows[j], rows[i]
        elif kind == "row_scale":
            _, i, g = move
            g = scal(g)
            if g.is_zero():
                raise MoveError("row scaling by zero")
            rows[i] = [g * z for z in rows[i]]
        else:
            _, src, dst, g = move
            if src == dst:
                raise MoveError("row addition needs two different rows")
            g = scal(g)
            rows[dst] = [a + g * b for a, b in zip(rows[dst], rows[src])]
        return MatrixCorep.from_rows(P, T, M.widths(), rows) if M.d0 else M
    if kind in ("col_swap", "col_scale", "col_add"):
        x = move[1]
        strong = P.is_strong_point(x)
        if kind == "col_swap":
            _, _, i, j = move
            a, b = col(x, i), col(x, j)
            set_col(x, i, b)
            set_col(x, j, a)
        elif kind == "col_scale":
            _, _, i, c = move
            c = scal(c)
            check_coef(c, strong, "column scaling")
            if c.is_zero():
                raise MoveError("column scaling by zero")
            set_col(x, i, [c * z for z in col(x, i)])
        else:
            _, _, src, dst, c = move
            if src == dst:
                raise MoveError("column addition needs two different columns")
            c = scal(c)
            check_coef(c, strong, "column addition")
            set_col(x, dst, [a + c * b for a, b in zip(col(x, dst), col(x, src))])
        return MatrixCorep(P, T, M.d0, stripes)
    if kind == "cross_add":
        _, x, i, y, j, c = move
        if not P.lt(x, y):
            raise MoveError(f"no move from stripe {x} into stripe {y}: {x} is not below {y}")
        c = scal(c)
        check_coef(c, P.is_strong_rel(x, y), f"addition {x} -> {y}")
        set_col(y, j, [a + c * b for a, b in zip(col(y, j), col(x, i))])
        return MatrixCorep(P, T, M.d0, stripes)
    raise MoveError(f"unknown move {kind!r}")


def random_moves(M: MatrixCorep, count: int, rng) -> list:
    """Random legal moves, for property tests."""
    T, P = M.tower, M.poset
    F = T.F
    moves = []

    def rand_f(nonzero=False):
        if F.finite:
            lo = 1 if nonzero else 0
            return T.g(int(rng.integers(lo, F.p)), 0)
        v = int(rng.integers(1 if nonzero else -3, 4))
        return T.g(v, 0)

    def rand_g(nonzero=False):
        while True:
            if F.finite:
                z = T.g(int(rng.integers(0, F.p)), int(rng.integers(0, F.p)))
            else:
                z = T.g(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
            if not nonzero or not z.is_zero():
                return z

    rels = [(x, y) for x, y, _ in P.strict_relations() if M.stripes[x].shape[1] and M.stripes[y].shape[1]]
    while len(moves) < count:
        r = int(rng.integers(0, 4))
        if r == 0 and M.d0 >= 2:
            i, j = rng.choice(M.d0, 2, replace=False)
            moves.append(("row_add", int(i), int(j), rand_g()))
        elif r == 1 and M.d0 >= 1:
            moves.append(("row_scale", int(rng.integers(0, M.d0)), rand_g(True)))
        elif r == 2:
            xs = [x for x in P.ids if M.stripes[x].shape[1] >= 2]
            if xs:
                x = xs[int(rng.integers(0, len(xs)))]
                i, j = rng.choice(M.stripes[x].shape[1], 2, replace=False)
                c = rand_g() if P.is_strong_point(x) else rand_f()
                moves.append(("col_add", x, int(i), int(j), c))
        elif r == 3 and rels:
            x, y = rels[int(rng.integers(0, len(rels)))]
            c = rand_g() if P.is_strong_rel(x, y) else rand_f()
            moves.append(("cross_add", x, int(rng.integers(0, M.stripes[x].shape[1])), y,
                          int(rng.integers(0, M.stripes[y].shape[1])), c))
    return moves
