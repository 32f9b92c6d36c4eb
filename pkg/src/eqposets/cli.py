"""Command-line entry point: ``eqp <group> <command> ...``.

Exit codes: 0 success or pass, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import catalog
from .corep import (CorepError, are_isomorphic, decompose_report, dim_vector, direct_sum, dual_corep,
                    indecomposability, matrix_of, spaces_of)
from .fields import FieldError, parse_poly, preset
from .io import FormatError, format_corep, format_poset, parse_corep, parse_poset
from .poset import PosetError, one_parameter_criterion, sincere_class
from .tits import (TitsError, classify_vector, enumerate_admissible_roots, parse_dimvector, tits_form)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# loading

def load_poset(spec: str):
    """A .poset file path, or a catalog name such as ``A25`` or ``K6*``."""
    p = Path(spec)
    if p.exists():
        return parse_poset(p.read_text(), source=str(p))
    try:
        return catalog.catalog_poset(spec)
    except KeyError:
        raise UsageError(f"{spec}: no such file or catalog poset") from None


def load_corep(path: str, field: str | None):
    p = Path(path)
    if not p.exists():
        raise UsageError(f"{path}: no such file")
    tower = preset(field) if field else None
    return parse_corep(p.read_text(), tower=tower, source=str(p))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# poset

def cmd_poset(a) -> int:
    P = load_poset(a.file)
    if a.cmd == "check":
        print(f"{P.name}: {len(P)} points ({len(P.strong_points)} strong, {len(P.weak_points)} weak)")
        sys.stdout.write(format_poset(P))
        return EXIT_OK
    if a.cmd == "criterion":
        print(one_parameter_criterion(P))
        return EXIT_OK
    hit = sincere_class(P)
    print(f"{hit[0]} ({hit[1]})" if hit else "not among the sincere one-parameter posets")
    return EXIT_OK


# --------------------------------------------------------------------------
# tits

def _box(text: str):
    parts = [int(v) for v in text.split(",")]
    return parts[0] if len(parts) == 1 else parts


def cmd_tits(a) -> int:
    P = load_poset(a.file)
    if a.cmd == "roots":
        roots = enumerate_admissible_roots(P, _box(a.box))
        for r in roots:
            print(f"{r.compact()}\t{tits_form(P, r)}")
        return EXIT_OK
    if not a.d:
        raise UsageError(f"tits {a.cmd}: --d is required")
    d = parse_dimvector(P, a.d)
    if a.cmd == "eval":
        print(tits_form(P, d))
    else:
        print(classify_vector(P, d))
    return EXIT_OK


# --------------------------------------------------------------------------
# corep

def cmd_corep(a) -> int:
    Ms = [load_corep(f, a.field) for f in a.files]
    need = {"dim": 1, "decompose": 1, "dual": 1, "iso": 2, "sum": 2}[a.cmd]
    if (a.cmd in ("dim", "decompose", "dual") and len(Ms) != 1) or len(Ms) < need:
        raise UsageError(f"corep {a.cmd}: expected {'one file' if need == 1 else 'two or more files'}")
    if a.cmd == "iso" and len(Ms) != 2:
        raise UsageError("corep iso: expected two files")
    M = Ms[0]
    if a.cmd == "dim":
        U = spaces_of(M)
        d = dim_vector(U)
        print(f"{d.format()}\tf={tits_form(M.poset, d)}\t{indecomposability(U).status}")
        return EXIT_OK
    if a.cmd == "decompose":
        rep = decompose_report(spaces_of(M))
        chunks = []
        for i, (W, how) in enumerate(zip(rep.summands, rep.methods)):
            chunks.append(f"# summand {i + 1}: {dim_vector(W).format()} ({how})\n"
                          + format_corep(matrix_of(W), a.field))
        _emit("\n".join(chunks), a.out)
        print(f"{len(rep.summands)} summand(s)" + ("" if rep.certified else f", {rep.undecided} undecided"),
              file=sys.stderr if not a.out else sys.stdout)
        return EXIT_OK if rep.certified else EXIT_FAIL
    if a.cmd == "iso":
        same = are_isomorphic(spaces_of(Ms[0]), spaces_of(Ms[1]))
        print("isomorphic" if same else "not isomorphic")
        return EXIT_OK
    if a.cmd == "dual":
        D = dual_corep(spaces_of(M))
        _emit(format_corep(matrix_of(D), a.field), a.out)
        return EXIT_OK
    S = Ms[0]
    for N in Ms[1:]:
        S = direct_sum(S, N)
    _emit(format_corep(S, a.field), a.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# catalog

def cmd_catalog(a) -> int:
    T = preset(a.field or "gf2")
    name = a.id
    if name in catalog.TABLE2:
        M = catalog.table2_coreps(T)[name]
    elif name in catalog.FINITE_IDS or name in catalog.FINITE_F:
        M = catalog.finite_type_corep(name, a.type, T)
    elif name == "K6-5":
        M = catalog.k6_discrete(a.n or 1, T)
    elif name in ("K6", "K7", "K8"):
        if not a.x:
            raise UsageError(f"catalog emit {name}: series need --x <monic polynomial>")
        from .fields import frobenius_companion
        coeffs = parse_poly(T, a.x)
        if a.n and a.n != len(coeffs):
            raise UsageError(f"--n {a.n} does not match the degree of {a.x!r}")
        X = frobenius_companion(T, coeffs, f_only=(name != "K8"))
        n = len(coeffs)
        if name == "K6":
            M = catalog.k6_series(n, X, T)
        elif name == "K7":
            M = catalog.k7_series(n, X, T)
        else:
            M = catalog.k8_series(a.variant or catalog.default_k8_variant(T), n, X, T)
    else:
        raise UsageError(f"catalog emit: unknown id {name!r}")
    _emit(format_corep(M, a.field or T.name), a.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# verify

def cmd_verify(a) -> int:
    from . import verify as V
    T = preset(a.field or "gf2")
    box = int(a.box)
    reports = []
    if a.cmd == "tables":
        reports.append(V.verify_tits_tables())
    elif a.cmd == "catalog":
        reports.append(V.verify_catalog(T))
    elif a.cmd == "theorem-d":
        for pid in a.poset or ["K6", "A25"]:
            P = catalog.catalog_poset(pid)
            reports.append(V.verify_theorem_d(P, box, T, a.budget))
        if T.name == "gf2" and not a.poset:
            reports.append(V.gf3_spot_check())
    elif a.cmd == "series":
        plan = [(p, n) for p in (a.poset or ["K6", "K7"]) for n in ((1, 2) if p in ("K6", "K8") else (1,))]
        for pid, n in plan:
            reports.append(V.verify_series_separation(pid, a.n or n, T))
    else:
        for pid in a.poset or ["K6", "A25"]:
            P = catalog.catalog_poset(pid)
            reports.append(V.verify_duality_suite(P, box, T))
    total = V.Report(f"verify {a.cmd}")
    for r in reports:
        print(r.summary())
        for row in r.failures:
            print("  FAIL\t" + "\t".join(row[:3]))
        total.extend(r)
    if a.out:
        Path(a.out).write_text(total.tsv())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eqp", description="Equipped posets, corepresentations and Tits forms.")
    groups = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = groups.add_parser("poset", help="inspect a poset file")
    g.add_argument("cmd", choices=["check", "criterion", "sincere"])
    g.add_argument("file")
    g.set_defaults(func=cmd_poset)

    g = groups.add_parser("tits", help="Tits form and roots")
    g.add_argument("cmd", choices=["eval", "classify", "roots"])
    g.add_argument("file")
    g.add_argument("--d", help='dimension vector, e.g. "1; a=1, eta=1"')
    g.add_argument("--box", default="2", help="bound for roots: one integer or d0,x1,...")
    g.set_defaults(func=cmd_tits)

    g = groups.add_parser("corep", help="matrix corepresentation files")
    g.add_argument("cmd", choices=["dim", "decompose", "iso", "dual", "sum"])
    g.add_argument("files", nargs="+")
    g.add_argument("--field", choices=["gf2", "qsqrt2", "gf3"])
    g.add_argument("--out")
    g.set_defaults(func=cmd_corep)

    g = groups.add_parser("catalog", help="emit listed and series matrices")
    g.add_argument("cmd", choices=["emit"])
    g.add_argument("id", help="F13..F18, 4(K6-4), 4(A25-5), 4(A25*-5), K6-5, or a series K6|K7|K8")
    g.add_argument("--type", help="letter for finite types with several matrices")
    g.add_argument("--n", type=int)
    g.add_argument("--x", help="monic polynomial for series, e.g. t^2+t+1")
    g.add_argument("--variant", choices=["char2", "separable", "inseparable"])
    g.add_argument("--field", choices=["gf2", "qsqrt2", "gf3"])
    g.add_argument("--out")
    g.set_defaults(func=cmd_catalog)

    g = groups.add_parser("verify", help="run a verification suite")
    g.add_argument("cmd", choices=["tables", "catalog", "theorem-d", "series", "duality"])
    g.add_argument("--poset", action="append", help="restrict to a poset id (repeatable)")
    g.add_argument("--field", choices=["gf2", "qsqrt2", "gf3"])
    g.add_argument("--box", default="2")
    g.add_argument("--budget", type=int, default=10 ** 7)
    g.add_argument("--n", type=int)
    g.add_argument("--out")
    g.add_argument("--threads", type=int, help="sets EQP_THREADS")
    g.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
        if getattr(a, "threads", None):
            os.environ["EQP_THREADS"] = str(a.threads)
        return a.func(a)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, PosetError, TitsError, FieldError, CorepError, catalog.CatalogError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
