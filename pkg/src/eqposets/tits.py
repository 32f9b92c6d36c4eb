"""The Tits quadratic form of an equipped poset, reflections and roots."""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .poset import EquippedPoset


class TitsError(ValueError):
    pass


@dataclass(frozen=True)
class DimVector:
    """(d0; d_x) over P* = {0} + P, stored in poset order."""

    ids: tuple
    values: tuple  # values[0] = d0, values[i+1] = d at ids[i]

    @classmethod
    def of(cls, P: EquippedPoset, d0: int, coords=None, **kw) -> "DimVector":
        """Build from a mapping (missing points are 0) or a positional sequence."""
        if coords is None:
            coords = kw
        if isinstance(coords, dict):
            unknown = set(coords) - set(P.ids)
            if unknown:
                raise TitsError(f"unknown points {sorted(unknown)} for {P.name}")
            vals = [int(coords.get(x, 0)) for x in P.ids]
        else:
            vals = [int(v) for v in coords]
            if len(vals) != len(P):
                raise TitsError(f"{P.name} needs {len(P)} coordinates, got {len(vals)}")
        return cls(tuple(P.ids), (int(d0), *vals))

    @classmethod
    def from_array(cls, P, arr) -> "DimVector":
        return cls(tuple(P.ids), tuple(int(v) for v in arr))

    @property
    def d0(self) -> int:
        return self.values[0]

    def __getitem__(self, x):
        if x in (0, "0"):
            return self.values[0]
        return self.values[1 + self.ids.index(x)]

    def as_dict(self) -> dict:
        return dict(zip(self.ids, self.values[1:]))

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)

    def _same(self, other):
        if self.ids != other.ids:
            raise TitsError("dimension vectors over different posets")

    def __add__(self, other):
        self._same(other)
        return DimVector(self.ids, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._same(other)
        return DimVector(self.ids, tuple(a - b for a, b in zip(self.values, other.values)))

    def __le__(self, other):
        self._same(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def scaled(self, k: int) -> "DimVector":
        return DimVector(self.ids, tuple(k * v for v in self.values))

    def is_nonneg(self) -> bool:
        return all(v >= 0 for v in self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def is_sincere(self) -> bool:
        return all(v > 0 for v in self.values[1:])

    def format(self, omit_zero: bool = False) -> str:
        parts = [f"{x}={v}" for x, v in zip(self.ids, self.values[1:]) if v or not omit_zero]
        return f"{self.d0}; " + ", ".join(parts) if parts else f"{self.d0};"

    def compact(self) -> str:
        return "(" + ",".join(str(v) for v in self.values) + ")"

    def __str__(self):
        return self.format()


def parse_dimvector(P: EquippedPoset, text: str) -> DimVector:
    """Parse ``d0; x=n, y=m`` (omitted coordinates are zero)."""
    head, _, rest = text.partition(";")
    try:
        d0 = int(head.strip())
    except ValueError:
        raise TitsError(f"bad d0 in {text!r}") from None
    coords = {}
    for part in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = part.partition("=")
        if not eq:
            raise TitsError(f"expected point=value, got {part!r}")
        try:
            coords[key.strip()] = int(val)
        except ValueError:
            raise TitsError(f"bad value in {part!r}") from None
    return DimVector.of(P, d0, coords)


def _vec(P: EquippedPoset, d) -> np.ndarray:
    if isinstance(d, DimVector):
        if d.ids != tuple(P.ids):
            raise TitsError(f"dimension vector indexed by {d.ids}, poset {P.name} has {P.ids}")
        return d.array()
    a = np.asarray(d, dtype=np.int64)
    if a.shape != (len(P) + 1,):
        raise TitsError(f"{P.name} needs {len(P) + 1} coordinates")
    return a


def l_matrix(P: EquippedPoset) -> np.ndarray:
    """l_xy over P* (index 0 is the extra point 0)."""
    n = len(P)
    L = np.zeros((n + 1, n + 1), dtype=np.int64)
    L[0, 0] = 2
    L[1:, 1:] = np.where(P.strong, 2, np.where(P.leq, 1, 0))
    return L


def gram2(P: EquippedPoset) -> np.ndarray:
    """Integer matrix G with d^T G d = 2 f(d); <x, y> = x^T G y / 2."""
    L = l_matrix(P)
    G = L + L.T
    G[0, 1:] -= 2
    G[1:, 0] -= 2
    return G


def tits_form(P: EquippedPoset, d) -> int:
    v = _vec(P, d)
    L = l_matrix(P)
    return int(v @ L @ v - 2 * v[0] * v[1:].sum())


def bilinear(P: EquippedPoset, d, e) -> Fraction:
    return Fraction(int(_vec(P, d) @ gram2(P) @ _vec(P, e)), 2)


def _coord(P, x) -> int:
    return 0 if x in (0, "0", None) else 1 + P.index(x)


def reflect(P: EquippedPoset, x, d) -> DimVector:
    k = _coord(P, x)
    v = _vec(P, d)
    lkk = int(l_matrix(P)[k, k])
    num = int((gram2(P) @ v)[k])
    if num % lkk:
        raise TitsError("reflection left the integer lattice")
    out = v.copy()
    out[k] -= num // lkk
    return DimVector.from_array(P, out)


def simple_root(P, x) -> DimVector:
    v = np.zeros(len(P) + 1, dtype=np.int64)
    v[_coord(P, x)] = 1
    return DimVector.from_array(P, v)


def _box_array(P, box) -> np.ndarray:
    if isinstance(box, DimVector):
        return _vec(P, box)
    if isinstance(box, int):
        return np.full(len(P) + 1, box, dtype=np.int64)
    return _vec(P, box)


def _reflection_orbit(P: EquippedPoset, bound: np.ndarray) -> set:
    G = gram2(P)
    L = l_matrix(P)
    diag = np.diag(L)
    m = len(P) + 1
    seen = set()
    queue = deque()
    for k in range(m):
        v = np.zeros(m, dtype=np.int64)
        v[k] = 1
        t = tuple(v.tolist())
        seen.add(t)
        queue.append(v)
    while queue:
        v = queue.popleft()
        Gv = G @ v
        for k in range(m):
            step = Gv[k] // diag[k]
            if step == 0:
                continue
            w = v.copy()
            w[k] -= step
            if abs(w[k]) > bound[k]:
                continue
            t = tuple(w.tolist())
            if t not in seen:
                seen.add(t)
                queue.append(w)
    return seen


def enumerate_admissible_roots(P: EquippedPoset, box) -> list:
    """Non-negative reflection images of simple roots with d0 > 0 inside ``box``."""
    bound = _box_array(P, box)
    roots = [t for t in _reflection_orbit(P, bound)
             if t[0] > 0 and all(c >= 0 for c in t) and all(c <= b for c, b in zip(t, bound))]
    return [DimVector(tuple(P.ids), t) for t in sorted(roots)]


def zeros_in_box(P: EquippedPoset, box) -> list:
    """All non-negative nonzero d in the box with f(d) = 0."""
    bound = _box_array(P, box)
    L = l_matrix(P)
    out = []
    ranges = [range(int(b) + 1) for b in bound[1:]]
    grid = np.array(list(itertools.product(*ranges)), dtype=np.int64).reshape(-1, len(P))
    quad = np.einsum("ni,ij,nj->n", grid, L[1:, 1:], grid)
    lin = grid.sum(axis=1)
    for d0 in range(int(bound[0]) + 1):
        f = 2 * d0 * d0 + quad - 2 * d0 * lin
        for row in grid[f == 0]:
            if d0 or row.any():
                out.append((d0, *row.tolist()))
    return [DimVector(tuple(P.ids), t) for t in out]


def minimal_imaginary_root(P: EquippedPoset, box=4):
    zs = [z for z in zeros_in_box(P, box) if math.gcd(*z.values) == 1]
    minimal = [z for z in zs if not any(w != z and w <= z for w in zs)]
    if not minimal:
        return None
    if len(minimal) > 1:
        raise TitsError(f"{P.name}: several minimal imaginary roots: "
                        + ", ".join(m.compact() for m in minimal))
    return minimal[0]


@dataclass(frozen=True)
class RootClass:
    tag: str
    poset_id: str | None = None
    k: int | None = None

    def __str__(self):
        if self.tag == "SpecialListed":
            return f"SpecialListed({self.poset_id}, k={self.k})"
        return self.tag


SPECIAL_FAMILIES = ("A45", "A46", "A47", "A48")


def _special_match(P: EquippedPoset, v: np.ndarray):
    from .catalog import sincere_dims, sincere_poset
    from .poset import poset_iso
    for cid in SPECIAL_FAMILIES:
        C = sincere_poset(cid)
        if len(C) != len(P):
            continue
        iso = poset_iso(P, C)
        if iso is None:
            continue
        for k in range(1, int(v[0]) + 1):
            dk, _ = sincere_dims(cid, k)
            mapped = [dk[iso[x]] for x in P.ids]
            if dk.d0 == v[0] and mapped == v[1:].tolist():
                return cid, k
    return None


def classify_vector(P: EquippedPoset, d, box=None, mu="auto") -> RootClass:
    v = _vec(P, d)
    if (v < 0).any():
        raise TitsError("classify_vector expects a non-negative vector")
    if not v.any():
        return RootClass("Other")
    f = tits_form(P, v)
    if f == 0:
        return RootClass("ImaginaryRoot")
    if box is None:
        if mu == "auto":
            try:
                mu = minimal_imaginary_root(P, 3)
            except TitsError:
                mu = None
        bound = 2 * (v + (mu.array() if mu is not None else 1))
    else:
        bound = _box_array(P, box)
    if v[0] > 0 and f in (1, 2) and (v <= bound).all():
        if tuple(v.tolist()) in _reflection_orbit(P, bound):
            return RootClass("AdmissibleRoot")
    hit = _special_match(P, v)
    if hit:
        return RootClass("SpecialListed", hit[0], hit[1])
    return RootClass("Other")


def same_type(P: EquippedPoset, d, e, mu=None) -> bool:
    if mu is None:
        mu = minimal_imaginary_root(P)
        if mu is None:
            raise TitsError(f"{P.name}: no imaginary root in the search box")
    diff = _vec(P, d) - _vec(P, e)
    if (diff < 0).any():
        diff = -diff
    if (diff < 0).any():
        return False
    m = _vec(P, mu)
    k = diff[0] // m[0] if m[0] else 0
    return bool((diff == k * m).all())
