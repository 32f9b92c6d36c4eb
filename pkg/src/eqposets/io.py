"""Text formats for posets, matrix corepresentations and TSV reports."""
from __future__ import annotations

import io as _io
import numpy as np

from .fields import GElem, Tower, format_elem, parse_elem, preset
from .poset import EquippedPoset, PosetError, build_poset


class FormatError(ValueError):
    """Malformed input; the message carries the line number."""

    def __init__(self, msg: str, line: int | None = None, source: str | None = None):
        where = f"{source or '<input>'}:{line}: " if line else ""
        super().__init__(where + msg)
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


# --------------------------------------------------------------------------
# posets

def parse_poset(text: str, source: str | None = None) -> EquippedPoset:
    name = None
    points, gens = [], []
    for no, line in _lines(text):
        tok = line.split()
        head = tok[0]
        if head == "poset":
            if len(tok) != 2:
                raise FormatError("expected 'poset <name>'", no, source)
            name = tok[1]
        elif head == "point":
            if len(tok) != 3 or tok[2] not in ("weak", "strong"):
                raise FormatError("expected 'point <id> weak|strong'", no, source)
            points.append((tok[1], tok[2]))
        elif head == "rel":
            if len(tok) not in (4, 5) or tok[2] != "<" or (len(tok) == 5 and tok[4] not in ("weak", "strong")):
                raise FormatError("expected 'rel <x> < <y> weak|strong'", no, source)
            gens.append((tok[1], tok[3], tok[4] if len(tok) == 5 else None))
        else:
            raise FormatError(f"unknown directive {head!r}", no, source)
    if name is None:
        raise FormatError("missing 'poset <name>' header", None, source)
    try:
        return build_poset(name, points, gens)
    except PosetError as e:
        raise FormatError(str(e), None, source) from None


def format_poset(P: EquippedPoset) -> str:
    out = [f"poset {P.name}"]
    for x in P.ids:
        out.append(f"point {x} {'strong' if P.is_strong_point(x) else 'weak'}")
    for x, y, kind in P.covers():
        out.append(f"rel {x} < {y} {kind}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# matrix corepresentations

def parse_corep(text: str, poset_lookup=None, tower: Tower | None = None, source: str | None = None):
    """Parse the corep format; returns a MatrixCorep.

    ``poset_lookup`` maps a poset name to an EquippedPoset (defaults to the
    catalog).  ``tower`` overrides the field named in the header.
    """
    from .corep import CorepError, MatrixCorep
    header = None
    widths = None
    rows = []
    empty_rows = None
    for no, line in _lines(text):
        if header is None:
            tok = line.split()
            if len(tok) != 4 or tok[0] != "corep" or tok[2] != "field":
                raise FormatError("expected 'corep <poset> field <preset>'", no, source)
            header = (tok[1], tok[3], no)
            continue
        if widths is None:
            if not line.startswith("stripes:"):
                raise FormatError("expected 'stripes: x=n ...'", no, source)
            widths = []
            for part in line[len("stripes:"):].split():
                k, eq, v = part.partition("=")
                if not eq or not v.isdigit():
                    raise FormatError(f"bad stripe width {part!r}", no, source)
                widths.append((k, int(v)))
            continue
        if line.startswith("rows:"):
            try:
                empty_rows = int(line[5:])
            except ValueError:
                raise FormatError("expected 'rows: <n>'", no, source) from None
            continue
        rows.append((no, line))
    if header is None or widths is None:
        raise FormatError("incomplete corep file", None, source)
    pname, fname, hno = header
    if poset_lookup is None:
        from .catalog import catalog_poset as poset_lookup
    try:
        P = poset_lookup(pname)
    except KeyError:
        raise FormatError(f"unknown poset {pname!r}", hno, source) from None
    if tower is None:
        try:
            tower = preset(fname)
        except Exception as e:
            raise FormatError(str(e), hno, source) from None
    order = [k for k, _ in widths]
    unknown = [k for k in order if k not in P.ids]
    if unknown:
        raise FormatError(f"stripes for unknown points {unknown}", None, source)
    total = [w for _, w in widths]
    stripes = {k: [] for k in order}
    for no, line in rows:
        cells = line.split("|")
        if len(cells) != len(order):
            raise FormatError(f"expected {len(order)} stripes separated by '|', got {len(cells)}", no, source)
        for (k, w), cell in zip(widths, cells):
            ents = cell.split()
            if len(ents) != w:
                raise FormatError(f"stripe {k}: expected {w} entries, got {len(ents)}", no, source)
            try:
                stripes[k].append([parse_elem(tower, e) for e in ents])
            except Exception as e:
                raise FormatError(f"bad entry in stripe {k}: {e}", no, source) from None
    d0 = len(rows)
    if empty_rows is not None:
        if rows or sum(total):
            raise FormatError("'rows:' is only allowed when every stripe is empty", None, source)
        d0 = empty_rows
    arrs = {}
    for k, w in widths:
        a = tower.gzeros(d0, w)
        for i, r in enumerate(stripes[k]):
            for j, z in enumerate(r):
                a[i, j] = (z.re, z.im)
        arrs[k] = a
    try:
        M = MatrixCorep(P, tower, d0, arrs)
    except CorepError as e:
        raise FormatError(str(e), None, source) from None
    M.order = order
    return M


def format_corep(M, field_name: str | None = None, order=None) -> str:
    T = M.tower
    order = order or getattr(M, "order", None) or list(M.poset.ids)
    fname = field_name or T.name
    out = [f"corep {M.poset.name} field {fname}",
           "stripes: " + " ".join(f"{x}={M.stripes[x].shape[1]}" for x in order)]
    if not sum(M.stripes[x].shape[1] for x in order):
        out.append(f"rows: {M.d0}")
        return "\n".join(out) + "\n"
    for i in range(M.d0):
        cells = []
        for x in order:
            s = M.stripes[x]
            cells.append(" ".join(format_elem(T.entry(s, i, j)) for j in range(s.shape[1])))
        out.append(" | ".join(cells))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# TSV

def write_tsv(header, rows) -> str:
    buf = _io.StringIO()
    buf.write("\t".join(header) + "\n")
    for r in rows:
        buf.write("\t".join(str(c) for c in r) + "\n")
    return buf.getvalue()


def read_tsv(text: str):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split("\t")
    return header, [ln.split("\t") for ln in lines[1:]]
