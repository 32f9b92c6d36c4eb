"""2-equipped posets: closure, predicates, isomorphism and critical subposets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


class PosetError(ValueError):
    pass


class ContradictionError(PosetError):
    pass


def _bool_mm(A, B):
    return (A.astype(np.int64) @ B.astype(np.int64)) > 0


class EquippedPoset:
    """A finite poset with order ``leq`` and strong sub-relation ``strong``.

    ``leq[i, j]`` means point i <= point j.  A point i is strong when
    ``strong[i, i]`` holds.  Instances are treated as immutable.
    """

    def __init__(self, name: str, ids, leq, strong, check: bool = True):
        self.name = name
        self.ids = tuple(ids)
        self.leq = np.array(leq, dtype=bool)
        self.strong = np.array(strong, dtype=bool)
        self.leq.setflags(write=False)
        self.strong.setflags(write=False)
        self._index = {x: i for i, x in enumerate(self.ids)}
        if len(self._index) != len(self.ids):
            raise PosetError("duplicate point ids")
        if check:
            self.validate()

    # basics ---------------------------------------------------------------
    def __len__(self):
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __repr__(self):
        return f"EquippedPoset({self.name!r}, {len(self)} points)"

    def __eq__(self, other):
        return (isinstance(other, EquippedPoset) and self.ids == other.ids
                and np.array_equal(self.leq, other.leq) and np.array_equal(self.strong, other.strong))

    def __hash__(self):
        return hash((self.ids, self.leq.tobytes(), self.strong.tobytes()))

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise PosetError(f"unknown point {x!r} in {self.name}") from None

    def indices(self, X) -> list[int]:
        return [self.index(x) for x in X]

    def is_strong_point(self, x) -> bool:
        return bool(self.strong[self.index(x), self.index(x)])

    @property
    def strong_points(self):
        return [x for i, x in enumerate(self.ids) if self.strong[i, i]]

    @property
    def weak_points(self):
        return [x for i, x in enumerate(self.ids) if not self.strong[i, i]]

    @property
    def weak(self) -> np.ndarray:
        return self.leq & ~self.strong

    def le(self, x, y) -> bool:
        return bool(self.leq[self.index(x), self.index(y)])

    def lt(self, x, y) -> bool:
        return x != y and self.le(x, y)

    def is_strong_rel(self, x, y) -> bool:
        return bool(self.strong[self.index(x), self.index(y)])

    def comparable(self, x, y) -> bool:
        return self.le(x, y) or self.le(y, x)

    def validate(self):
        n = len(self.ids)
        L, S = self.leq, self.strong
        if L.shape != (n, n) or S.shape != (n, n):
            raise PosetError("relation matrices have the wrong shape")
        if not L.diagonal().all():
            raise PosetError("order is not reflexive")
        if (L & L.T & ~np.eye(n, dtype=bool)).any():
            raise PosetError("order is not antisymmetric")
        if (_bool_mm(L, L) & ~L).any():
            raise PosetError("order is not transitive")
        if (S & ~L).any():
            raise PosetError("strong relation is not contained in the order")
        if ((_bool_mm(L, S) | _bool_mm(S, L)) & ~S).any():
            raise PosetError("strong relation is not closed under composition with the order")

    # relation listings ------------------------------------------------------
    def strict_relations(self):
        """All (x, y, kind) with x < y."""
        out = []
        for i, j in zip(*np.nonzero(self.leq)):
            if i != j:
                out.append((self.ids[i], self.ids[j], "strong" if self.strong[i, j] else "weak"))
        return out

    def covers(self):
        """Hasse edges plus strong relations not implied by the closure law."""
        n = len(self)
        L = self.leq & ~np.eye(n, dtype=bool)
        out = []
        for i, j in zip(*np.nonzero(L)):
            is_cover = not any(L[i, k] and L[k, j] for k in range(n))
            if is_cover:
                out.append((self.ids[i], self.ids[j], "strong" if self.strong[i, j] else "weak"))
        gens = [(x, y, k) for x, y, k in out]
        trial = build_poset(self.name, [(x, "strong" if self.is_strong_point(x) else "weak") for x in self.ids],
                            [(x, y, k if k == "weak" else "strong") for x, y, k in gens], infer=True)
        for i, j in zip(*np.nonzero(self.strong & ~trial.strong)):
            gens.append((self.ids[i], self.ids[j], "strong"))
        return gens

    # constructions ---------------------------------------------------------
    def dual(self) -> "EquippedPoset":
        name = self.name[:-1] if self.name.endswith("*") else self.name + "*"
        return EquippedPoset(name, self.ids, self.leq.T, self.strong.T, check=False)

    def subposet(self, X, name: str | None = None) -> "EquippedPoset":
        idx = self.indices(X)
        return EquippedPoset(name or f"{self.name}|{','.join(map(str, X))}", [self.ids[i] for i in idx],
                             self.leq[np.ix_(idx, idx)], self.strong[np.ix_(idx, idx)], check=False)

    def relabel(self, mapping: dict, name: str | None = None) -> "EquippedPoset":
        return EquippedPoset(name or self.name, [mapping.get(x, x) for x in self.ids], self.leq, self.strong)

    def matrix_text(self) -> str:
        """Closed relation as a matrix: '.', 'w' (weak), 's' (strong)."""
        width = max([len(str(x)) for x in self.ids] + [1])
        lines = [" " * width + " " + " ".join(str(x).rjust(width) for x in self.ids)]
        for i, x in enumerate(self.ids):
            cells = []
            for j in range(len(self)):
                c = "s" if self.strong[i, j] else ("w" if self.leq[i, j] else ".")
                cells.append(c.rjust(width))
            lines.append(str(x).rjust(width) + " " + " ".join(cells))
        return "\n".join(lines)


def build_poset(name: str, points, gens, infer: bool = False) -> EquippedPoset:
    """Close generating relations into an equipped poset.

    ``points`` is a list of (id, 'weak'|'strong'); ``gens`` a list of
    (x, y, kind) meaning x < y.  kind may be 'weak', 'strong' or None
    (weak unless the closure law forces strength).  A generator declared weak that
    closure forces strong is a contradiction unless ``infer`` is set.
    """
    ids = [p[0] for p in points]
    kinds = [p[1] for p in points]
    if len(set(ids)) != len(ids):
        raise PosetError("duplicate point ids")
    idx = {x: i for i, x in enumerate(ids)}
    n = len(ids)
    L = np.eye(n, dtype=bool)
    S = np.zeros((n, n), dtype=bool)
    for i, k in enumerate(kinds):
        if k not in ("weak", "strong"):
            raise PosetError(f"point {ids[i]!r}: kind must be weak or strong")
        S[i, i] = k == "strong"
    declared_weak = []
    for g in gens:
        x, y = g[0], g[1]
        kind = g[2] if len(g) > 2 else None
        if x not in idx or y not in idx:
            raise PosetError(f"relation {x} < {y} uses an undeclared point")
        if x == y:
            raise PosetError(f"relation {x} < {x} is a cycle")
        i, j = idx[x], idx[y]
        L[i, j] = True
        if kind == "strong":
            S[i, j] = True
        elif kind == "weak":
            declared_weak.append((i, j))
        elif kind is not None:
            raise PosetError(f"relation kind {kind!r} must be weak or strong")
    for k in range(n):
        L |= np.outer(L[:, k], L[k, :])
    cyc = L & L.T & ~np.eye(n, dtype=bool)
    if cyc.any():
        i, j = map(int, np.argwhere(cyc)[0])
        raise PosetError(f"cycle through {ids[i]} and {ids[j]}")
    S &= L
    while True:
        S2 = S | _bool_mm(L, S) | _bool_mm(S, L)
        if (S2 == S).all():
            break
        S = S2
    for i in range(n):
        if kinds[i] == "weak" and S[i, i]:
            raise ContradictionError(f"weak point {ids[i]} forced strong")
    if not infer:
        for i, j in declared_weak:
            if S[i, j]:
                raise ContradictionError(
                    f"{ids[i]} < {ids[j]} declared weak but forced strong by {_witness(ids, L, S, i, j)}")
    return EquippedPoset(name, ids, L, S)


def _witness(ids, L, S, i, j) -> str:
    n = len(ids)
    for k in range(n):
        if k in (i, j):
            continue
        if L[i, k] and S[k, j]:
            return f"{ids[i]} <= {ids[k]} strong< {ids[j]}"
        if S[i, k] and L[k, j]:
            return f"{ids[i]} strong< {ids[k]} <= {ids[j]}"
    if S[i, i]:
        return f"strong point {ids[i]}"
    return f"strong point {ids[j]}"


def disjoint_union(P: EquippedPoset, Q: EquippedPoset, name: str | None = None) -> EquippedPoset:
    clash = set(P.ids) & set(Q.ids)
    qids = [f"{x}'" if x in clash else x for x in Q.ids]
    n, m = len(P), len(Q)
    L = np.zeros((n + m, n + m), dtype=bool)
    S = np.zeros((n + m, n + m), dtype=bool)
    L[:n, :n], L[n:, n:] = P.leq, Q.leq
    S[:n, :n], S[n:, n:] = P.strong, Q.strong
    return EquippedPoset(name or f"{P.name}+{Q.name}", list(P.ids) + qids, L, S)


def dual_poset(P: EquippedPoset) -> EquippedPoset:
    return P.dual()


# weights, cones, predicates -------------------------------------------------

def _antichain(P, idx) -> bool:
    return all(not (P.leq[i, j] or P.leq[j, i]) for i, j in itertools.combinations(idx, 2))


def point_weight(P, x) -> int:
    return 1 if P.is_strong_point(x) else 2


def weight(P: EquippedPoset, X=None) -> int:
    """Weight of the antichain X, or the poset weight (max over antichains)."""
    if X is not None:
        idx = P.indices(X)
        if not _antichain(P, idx):
            raise PosetError("weight of a set that is not an antichain")
        return sum(1 if P.strong[i, i] else 2 for i in idx)
    n = len(P)
    inc = ~(P.leq | P.leq.T)
    w = [1 if P.strong[i, i] else 2 for i in range(n)]
    best = 0

    def grow(cands, total):
        nonlocal best
        if total > best:
            best = total
        if total + sum(w[c] for c in cands) <= best:
            return
        for k, c in enumerate(cands):
            grow([d for d in cands[k + 1:] if inc[c, d]], total + w[c])

    grow(list(range(n)), 0)
    return best


def max_antichains(P: EquippedPoset):
    """All antichains attaining the poset weight."""
    target = weight(P)
    out = []
    for r in range(1, len(P) + 1):
        for X in itertools.combinations(P.ids, r):
            if _antichain(P, P.indices(X)) and weight(P, X) == target:
                out.append(set(X))
    return out


def n_set(P: EquippedPoset, X) -> set:
    idx = P.indices(X)
    comp = P.leq | P.leq.T
    return {P.ids[z] for z in range(len(P)) if not any(comp[z, i] for i in idx)}


_CONE_ALIASES = {
    "∨": "up", "▽": "up_strong", "⋎": "up_weak",
    "∧": "down", "△": "down_strong", "⋏": "down_weak",
    "▼": "up_strict", "▲": "down_strict",
}


def cone(P: EquippedPoset, X, kind: str) -> set:
    kind = _CONE_ALIASES.get(kind, kind)
    idx = P.indices(X)
    rel = {"up": P.leq, "up_strong": P.strong, "up_weak": P.weak,
           "down": P.leq.T, "down_strong": P.strong.T, "down_weak": P.weak.T,
           "up_strict": P.leq, "down_strict": P.leq.T}.get(kind)
    if rel is None:
        raise PosetError(f"unknown cone kind {kind!r}")
    out = {P.ids[y] for y in range(len(P)) if any(rel[i, y] for i in idx)}
    if kind.endswith("_strict"):
        out -= set(X)
    return out


def is_garland(P: EquippedPoset, X) -> bool:
    rest = set(P.indices(X))
    while rest:
        minimal = [i for i in rest if not any(P.leq[j, i] for j in rest if j != i)]
        if len(minimal) > 2:
            return False
        others = rest - set(minimal)
        if not all(P.leq[i, j] for i in minimal for j in others):
            return False
        rest = others
    return True


def structure_predicates(P: EquippedPoset, X=None) -> dict:
    X = list(P.ids) if X is None else list(X)
    idx = P.indices(X)
    pairs = list(itertools.combinations(idx, 2))
    chain = all(P.leq[i, j] or P.leq[j, i] for i, j in pairs)
    anti = all(not (P.leq[i, j] or P.leq[j, i]) for i, j in pairs)
    cw = all(not P.strong[i, j] for i in idx for j in idx if P.leq[i, j])
    ordinary = all(P.strong[i, i] for i in idx)
    return {
        "chain": chain,
        "antichain": anti,
        "dyad": anti and len(idx) == 2,
        "triad": anti and len(idx) == 3,
        "garland": is_garland(P, X),
        "completely_weak": cw,
        "ordinary": ordinary,
    }


# isomorphism ----------------------------------------------------------------

def _signature(L, S, i):
    return (bool(S[i, i]), int(L[i].sum()), int(L[:, i].sum()), int(S[i].sum()), int(S[:, i].sum()))


def poset_iso(P: EquippedPoset, Q: EquippedPoset, anti: bool = False, limit: int = 12):
    """A bijection P -> Q preserving (or, with ``anti``, reversing) <= and strength."""
    n = len(P)
    if max(n, len(Q)) > limit:
        raise PosetError(f"poset_iso is brute force and limited to {limit} points")
    if len(Q) != n:
        return None
    LQ, SQ = (Q.leq.T, Q.strong.T) if anti else (Q.leq, Q.strong)
    LP, SP = P.leq, P.strong
    sp = [_signature(LP, SP, i) for i in range(n)]
    sq = [_signature(LQ, SQ, j) for j in range(n)]
    if sorted(sp) != sorted(sq):
        return None
    order = sorted(range(n), key=lambda i: sum(1 for j in range(n) if sq[j] == sp[i]))
    assign = [-1] * n
    used = [False] * n

    def ok(i, j):
        for k in range(n):
            a = assign[k]
            if a < 0:
                continue
            if LP[i, k] != LQ[j, a] or LP[k, i] != LQ[a, j]:
                return False
            if SP[i, k] != SQ[j, a] or SP[k, i] != SQ[a, j]:
                return False
        return True

    def rec(t):
        if t == n:
            return True
        i = order[t]
        for j in range(n):
            if not used[j] and sq[j] == sp[i] and ok(i, j):
                assign[i], used[j] = j, True
                if rec(t + 1):
                    return True
                assign[i], used[j] = -1, False
        return False

    if rec(0):
        return {P.ids[i]: Q.ids[assign[i]] for i in range(n)}
    return None


# critical posets ------------------------------------------------------------

def _ordinary_chains(name, lengths):
    pts, gens = [], []
    for c, ln in enumerate(lengths):
        ids = [f"c{c}_{k}" for k in range(ln)]
        pts += [(x, "strong") for x in ids]
        gens += [(ids[k], ids[k + 1], "strong") for k in range(ln - 1)]
    return pts, gens


def critical_posets() -> dict:
    """K1..K9 as equipped posets."""
    out = {}
    for tag, lengths in (("K1", (1, 1, 1, 1)), ("K2", (2, 2, 2)), ("K3", (1, 3, 3)), ("K4", (1, 2, 5))):
        pts, gens = _ordinary_chains(tag, lengths)
        out[tag] = build_poset(tag, pts, gens)
    pts, gens = _ordinary_chains("K5", (4,))
    pts += [(x, "strong") for x in ("n1", "n2", "n3", "n4")]
    gens += [("n1", "n2", "strong"), ("n3", "n2", "strong"), ("n3", "n4", "strong")]
    out["K5"] = build_poset("K5", pts, gens)
    out["K6"] = build_poset("K6", [("a", "weak"), ("b", "weak")], [])
    out["K7"] = build_poset("K7", [("a", "weak"), ("p", "weak"), ("q", "weak"), ("theta", "strong")],
                            [("a", "p", "weak"), ("p", "q", "weak")])
    out["K8"] = build_poset("K8", [("rho", "strong"), ("sigma", "strong"), ("a", "weak")], [])
    out["K9"] = build_poset("K9", [("a", "weak"), ("p", "weak"), ("zeta", "strong"), ("eta", "strong")],
                            [("a", "p", "weak"), ("zeta", "eta", "strong")])
    return out


_CRITICALS = None


def _criticals():
    global _CRITICALS
    if _CRITICALS is None:
        _CRITICALS = critical_posets()
    return _CRITICALS


def critical_occurrences(P: EquippedPoset):
    """All (tag, point-set) with the full subposet isomorphic to a critical poset."""
    strong = P.strong_points
    weak = P.weak_points
    out = []
    for tag, K in _criticals().items():
        ns, nw = len(K.strong_points), len(K.weak_points)
        if ns > len(strong) or nw > len(weak):
            continue
        for S in itertools.combinations(strong, ns):
            for W in itertools.combinations(weak, nw):
                X = [x for x in P.ids if x in S or x in W]
                if poset_iso(P.subposet(X), K, limit=16) is not None:
                    out.append((tag, frozenset(X)))
    return out


@dataclass
class CriterionResult:
    status: str
    count: int = 0
    types: int = 0
    occurrences: list = field(default_factory=list)

    def __str__(self):
        if self.status == "Undetermined":
            return "Undetermined (weight exceeds 4)"
        tags = sorted({t for t, _ in self.occurrences})
        noun = "occurrence" if self.count == 1 else "occurrences"
        detail = f"{self.count} critical {noun}" + (f": {', '.join(tags)}" if tags else "")
        if self.status == "NotOneParameter":
            return f"NotOneParameter({self.count}) ({detail}, {self.types} types)"
        return f"{self.status} ({detail})"


def one_parameter_criterion(P: EquippedPoset) -> CriterionResult:
    occ = critical_occurrences(P)
    types = len({t for t, _ in occ})
    if weight(P) > 4:
        # two critical subposets rule out one-parameter type at any weight
        if len(occ) >= 2:
            return CriterionResult("NotOneParameter", len(occ), types, occ)
        return CriterionResult("Undetermined")
    if len(occ) == 1:
        status = "OneParameter"
    elif not occ:
        status = "FiniteTypeCandidate"
    else:
        status = "NotOneParameter"
    return CriterionResult(status, len(occ), types, occ)


def sincere_class(P: EquippedPoset):
    """(catalog id, 'iso'|'anti') if P is one of the 28 sincere one-parameter posets."""
    from .catalog import SINCERE_IDS, sincere_poset
    ns = len(P.strong_points)
    for cid in SINCERE_IDS:
        C = sincere_poset(cid)
        if len(C) != len(P) or len(C.strong_points) != ns:
            continue
        if poset_iso(P, C) is not None:
            return cid, "iso"
        if poset_iso(P, C, anti=True) is not None:
            return cid, "anti"
    return None
