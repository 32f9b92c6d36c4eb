"""Catalog data: posets, listed matrices, series templates and dimension tables.

Everything is read from the text files under ``data/``; the functions here
only parse and assemble.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .fields import Tower, frobenius_companion, gf2_tower
from .io import parse_corep, parse_poset, read_tsv
from .poset import EquippedPoset, critical_posets
from .tits import DimVector


class CatalogError(KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "catalog error"


SINCERE_IDS = ("K6", "K7", "K8", "K9") + tuple(f"A{i}" for i in range(25, 49))
FINITE_IDS = ("F13", "F14", "F15", "F16", "F17", "F18")
FINITE_LETTERS = {"F13": "AB", "F14": "ABC", "F15": "ABCDEFG", "F16": "", "F17": "", "F18": ""}
# Tits value listed with each finite-type matrix
FINITE_F = {"F13-A": 1, "F13-B": 2, "F14-A": 1, "F14-B": 2, "F14-C": 2, "F15-A": 1, "F15-B": 1,
            "F15-C": 1, "F15-D": 1, "F15-E": 2, "F15-F": 2, "F15-G": 2, "F16": 2, "F17": 1, "F18": 1}
# Tits values: K6 type 4 is imaginary, A25 and A25* type 5 carry f = 2 in their tables
TABLE2_F = {"4(K6-4)": 0, "4(A25-5)": 2, "4(A25*-5)": 2}
TABLE2 = {"4(K6-4)": "K6-4_4", "4(A25-5)": "A25-5_4", "4(A25*-5)": "A25s-5_4"}


def _data(*parts) -> str:
    return resources.files("eqposets").joinpath("data", *parts).read_text()


def data_files(kind: str) -> list[str]:
    d = resources.files("eqposets").joinpath("data", kind)
    return sorted(p.name for p in d.iterdir() if p.is_file())


# --------------------------------------------------------------------------
# posets

@lru_cache(maxsize=None)
def _file_poset(name: str) -> EquippedPoset:
    try:
        text = _data("posets", f"{name}.poset")
    except FileNotFoundError:
        raise CatalogError(f"no catalog poset named {name!r}") from None
    return parse_poset(text, source=f"{name}.poset")


@lru_cache(maxsize=None)
def catalog_poset(name: str) -> EquippedPoset:
    """Any named poset: K1..K9, A25..A48, F13..F18, Fig1, with '*' for duals."""
    if name.endswith("*"):
        return catalog_poset(name[:-1]).dual()
    if name in ("K1", "K2", "K3", "K4", "K5"):
        return critical_posets()[name]
    return _file_poset(name)


def sincere_poset(pid: str) -> EquippedPoset:
    if pid.rstrip("*") not in SINCERE_IDS:
        raise CatalogError(f"{pid!r} is not one of the 28 sincere posets")
    return catalog_poset(pid)


# --------------------------------------------------------------------------
# parametric families

_TERM = re.compile(r"^(?:(\d*)k)?([+-]\d+)?$|^(\d+)$")


def _eval_k(expr: str, k: int) -> int:
    m = _TERM.match(expr.replace(" ", ""))
    if not m:
        raise CatalogError(f"bad family expression {expr!r}")
    if m.group(3) is not None:
        return int(m.group(3))
    a, b = m.group(1), m.group(2)
    return (int(a) if a else 1) * k + (int(b) if b else 0)


@dataclass(frozen=True)
class Family:
    poset_id: str
    d0: str
    coords: tuple
    f: int
    note: str = ""

    def at(self, k: int) -> DimVector:
        P = sincere_poset(self.poset_id)
        return DimVector.of(P, _eval_k(self.d0, k), {x: _eval_k(e, k) for x, e in self.coords})


@lru_cache(maxsize=None)
def families() -> dict:
    _, rows = read_tsv(_data("families.tsv"))
    out = {}
    for r in rows:
        pid, d0, coords, f = r[:4]
        note = r[4] if len(r) > 4 else ""
        pairs = tuple(tuple(kv.split("=")) for kv in coords.split(","))
        out[pid] = Family(pid, d0, pairs, int(f), note)
    return out


def sincere_dims(pid: str, k: int):
    """(d, f) of the annotated family at parameter k, or None when no family is drawn."""
    sincere_poset(pid)
    fam = families().get(pid)
    if fam is None:
        return None
    if k < 1:
        raise CatalogError("family parameter k must be >= 1")
    return fam.at(k), fam.f


# --------------------------------------------------------------------------
# dimension tables

@dataclass(frozen=True)
class DimTableRow:
    table: str
    T: str
    f: int
    d: DimVector

    @property
    def starred(self) -> bool:
        return self.table.endswith("*") or self.T.endswith("*")


@dataclass
class DimTable:
    table: str
    poset: EquippedPoset
    rows: list
    mu: DimVector | None = None

    def row(self, T) -> DimTableRow:
        for r in self.rows:
            if r.T == str(T):
                return r
        raise CatalogError(f"{self.table} has no row {T}")


@lru_cache(maxsize=None)
def _table_meta():
    _, rows = read_tsv(_data("coords.tsv"))
    return {t: (p, c.split(",")) for t, p, c in rows}


def table_ids() -> list:
    return list(_table_meta())


def _parse_compact(text: str):
    return [int(v) for v in text.strip("()").split(",")]


@lru_cache(maxsize=None)
def dim_table(tid: str) -> DimTable:
    meta = _table_meta()
    if tid not in meta:
        raise CatalogError(f"no dimension table {tid!r} (choose from {', '.join(meta)})")
    pname, coords = meta[tid]
    # K7 and K9 tabulate their starred rows inside one table over the poset itself
    P = catalog_poset(pname)
    _, rows = read_tsv(_data("dimtables.tsv"))
    out = []
    for t, T, f, d in rows:
        if t != tid:
            continue
        vals = _parse_compact(d)
        out.append(DimTableRow(tid, T, int(f), DimVector.of(P, vals[0], dict(zip(coords, vals[1:])))))
    mu = None
    _, steps = read_tsv(_data("steps.tsv"))
    for t, m in steps:
        if t == tid:
            vals = _parse_compact(m)
            mu = DimVector.of(P, vals[0], dict(zip(coords, vals[1:])))
    return DimTable(tid, P, out, mu)


# --------------------------------------------------------------------------
# listed matrices

def _load_corep(stem: str, tower: Tower | None):
    return parse_corep(_data("coreps", f"{stem}.corep"), poset_lookup=catalog_poset,
                       tower=tower or gf2_tower(), source=f"{stem}.corep")


def finite_type_names() -> list:
    out = []
    for pid in FINITE_IDS:
        letters = FINITE_LETTERS[pid]
        out.extend([f"{pid}-{c}" for c in letters] if letters else [pid])
    return out


def finite_type_corep(name: str, letter: str | None = None, tower: Tower | None = None):
    key = f"{name}-{letter}" if letter else name
    if key not in FINITE_F:
        raise CatalogError(f"no listed finite-type matrix {key!r}")
    return _load_corep(key, tower)


def table2_coreps(tower: Tower | None = None) -> dict:
    return {k: _load_corep(v, tower) for k, v in TABLE2.items()}


@dataclass(frozen=True)
class Initial:
    target: str
    source: str
    flagged: bool = False
    remark: str = ""


def table3_initials() -> list:
    """Initial corepresentations of the A25 classification, as listed."""
    return [
        Initial("1(A25-1)", "F14-A"),
        Initial("2(A25-2)", "F14-B", True,
                "the listed source repeats F14-B; the dimension (2; 2,0,1) is that of F14-C"),
        Initial("1(A25-4)", "F14-B"),
    ]


# --------------------------------------------------------------------------
# series

ZERO = ("zero",)


@dataclass(frozen=True)
class SeriesSpec:
    """Block template of an (F[t], G[t])-corepresentation.

    ``stripes`` maps a point to a list of block rows; each block is
    ('zero',), ('lin', lam, mu) for lam*I + mu*X or ('bar', lam, mu) for
    lam*I + mu*conj(X).  ``domain`` is one of 'frobenius-F', 'frobenius-G',
    'free-G'.
    """

    poset_id: str
    stripes: dict
    domain: str
    variant: str | None = None
    block_rows: int = field(default=0)


def _const(lam):
    return ("lin", lam, 0)


def k6_spec(kind: str = "series") -> SeriesSpec:
    if kind == "series":
        return SeriesSpec("K6", {"a": [[_const(1)]], "b": [[("lin", "x", 1)]]}, "frobenius-F", None, 1)
    raise CatalogError("the discrete K6 family is not a polynomial template; use k6_discrete")


def k7_spec() -> SeriesSpec:
    return SeriesSpec("K7", {
        "a": [[_const(1)], [_const(1)]],
        "p": [[("lin", 0, 1)], [_const("x")]],
        "q": [[_const(1)], [ZERO]],
        "theta": [[_const(1)], [ZERO]],
    }, "frobenius-F", None, 2)


def k8_spec(variant: str) -> SeriesSpec:
    top = [_const("x"), _const(1)]
    if variant == "char2":
        bottom = [("lin", 0, "x"), _const(1)]
    elif variant == "separable":
        bottom = [("barxi", None, None), ("bar", 1, 1)]
    elif variant == "inseparable":
        bottom = [("bar", "x", "x"), ("bar", 0, 1)]
    else:
        raise CatalogError(f"unknown K8 variant {variant!r}")
    return SeriesSpec("K8", {
        "rho": [[_const(1)], [ZERO]],
        "sigma": [[ZERO], [_const(1)]],
        "a": [top, bottom],
    }, "free-G", variant, 2)


def _as_gmatrix(tower: Tower, X, n: int | None = None) -> np.ndarray:
    if isinstance(X, np.ndarray) and X.ndim == 3:
        A = tower.F.norm(X.astype(tower.F.dtype))
    else:
        A = tower.garray(X)
    if A.shape[0] != A.shape[1]:
        raise CatalogError(f"X must be square, got {A.shape[0]}x{A.shape[1]}")
    if n is not None and A.shape[0] != n:
        raise CatalogError(f"X must be {n}x{n}, got {A.shape[0]}x{A.shape[1]}")
    return A


def _check_domain(tower: Tower, spec: SeriesSpec, X: np.ndarray):
    if spec.domain in ("frobenius-F",) and np.any(X[..., 1] != 0):
        raise CatalogError("X must have entries in F for this series")


def _check_variant(tower: Tower, variant: str | None, force: bool = False):
    if variant is None or force:
        return
    if variant == "char2" and tower.char != 2:
        raise CatalogError("the char2 variant needs a tower of characteristic 2")
    if variant == "separable" and tower.char == 2:
        raise CatalogError("the separable variant needs characteristic different from 2")
    if variant == "inseparable" and not (tower.char == 2 and tower.p == 0):
        raise CatalogError("the inseparable variant needs an inseparable extension, "
                           "which neither reference tower is")


def series_instantiate(spec: SeriesSpec, X, tower: Tower | None = None, force: bool = False):
    from .corep import MatrixCorep
    tower = tower or gf2_tower()
    X = _as_gmatrix(tower, X)
    _check_domain(tower, spec, X)
    _check_variant(tower, spec.variant, force)
    n = X.shape[0]
    Xbar = tower.bar_mat(X)
    xi = tower.xi

    def scal(v):
        return tower.coerce(v)

    def smul(z, A):
        return tower.gmul_mat(_scalar_mat(tower, z, n), A)

    def block(b):
        if b[0] == "zero":
            return tower.gzeros(n, n)
        if b[0] == "lin":
            return tower.F.norm(_scalar_mat(tower, scal(b[1]), n) + smul(scal(b[2]), X))
        if b[0] == "bar":
            return tower.F.norm(_scalar_mat(tower, scal(b[1]), n) + smul(scal(b[2]), Xbar))
        if b[0] == "barxi":  # conj(xi) I + xi conj(X)
            return tower.F.norm(_scalar_mat(tower, xi.bar(), n) + smul(xi, Xbar))
        raise CatalogError(f"unknown block {b!r}")

    P = sincere_poset(spec.poset_id)
    stripes = {}
    for x, brows in spec.stripes.items():
        stripes[x] = np.concatenate([np.concatenate([block(b) for b in br], axis=1) for br in brows], axis=0)
    d0 = n * len(next(iter(spec.stripes.values())))
    return MatrixCorep(P, tower, d0, stripes)


def _scalar_mat(tower: Tower, z, n: int) -> np.ndarray:
    m = tower.gzeros(n, n)
    for i in range(n):
        m[i, i] = (z.re, z.im)
    return m


def k6_series(n: int, X, tower: Tower | None = None):
    tower = tower or gf2_tower()
    X = _as_gmatrix(tower, X, n)
    if np.any(X[..., 1] != 0):
        raise CatalogError("k6_series needs X over F")
    return series_instantiate(k6_spec(), X, tower)


def k6_discrete(n: int, tower: Tower | None = None):
    from .corep import MatrixCorep
    tower = tower or gf2_tower()
    if n < 1:
        raise CatalogError("n must be >= 1")
    b = tower.geye(n)
    for i in range(n - 1):
        b[i, i + 1, 1] = tower.F.elem(1)  # xi on the superdiagonal
    return MatrixCorep(sincere_poset("K6"), tower, n, {"a": tower.geye(n), "b": b})


def k7_series(n: int, X, tower: Tower | None = None):
    tower = tower or gf2_tower()
    X = _as_gmatrix(tower, X, n)
    if np.any(X[..., 1] != 0):
        raise CatalogError("k7_series needs X over F")
    return series_instantiate(k7_spec(), X, tower)


def k8_series(variant: str, n: int, X, tower: Tower | None = None, force: bool = False):
    tower = tower or gf2_tower()
    X = _as_gmatrix(tower, X, n)
    return series_instantiate(k8_spec(variant), X, tower, force=force)


def companion_blocks(tower: Tower, n: int, scalars: str = "F") -> list:
    """Companion matrices of every monic polynomial of degree n (finite towers)."""
    from .fields import enumerate_monic
    return [(c, frobenius_companion(tower, list(c), f_only=(scalars == "F")))
            for c in enumerate_monic(tower, n, scalars)]


def default_k8_variant(tower: Tower) -> str:
    return "char2" if tower.char == 2 else "separable"


# --------------------------------------------------------------------------
# catalog-wide listings

def all_catalog_coreps(tower: Tower | None = None) -> dict:
    out = {}
    for name in finite_type_names():
        pid, _, letter = name.partition("-")
        out[name] = finite_type_corep(pid, letter or None, tower)
    out.update(table2_coreps(tower))
    return out
