from importlib.resources import files

import pytest

from eqposets.corep import MatrixCorep
from eqposets.io import FormatError, format_corep, parse_corep, parse_poset, read_tsv, write_tsv


def data_files(kind):
    return sorted(p for p in files("eqposets").joinpath("data", kind).iterdir() if p.name[0] != ".")


@pytest.mark.parametrize("path", data_files("coreps"), ids=lambda p: p.name)
def test_data_coreps_round_trip_exactly(path):
    text = path.read_text()
    assert format_corep(parse_corep(text)) == text


@pytest.mark.parametrize("path", data_files("posets"), ids=lambda p: p.name)
def test_data_posets_parse(path):
    P = parse_poset(path.read_text(), source=path.name)
    assert len(P) >= 1


def test_empty_stripes_use_rows_line(gf2):
    from eqposets.catalog import catalog_poset
    M = MatrixCorep(catalog_poset("K6"), gf2, 2, {})
    text = format_corep(M)
    assert "rows: 2" in text
    assert parse_corep(text) == M


@pytest.mark.parametrize("text,line,msg", [
    ("corep K6 field gf2\nstripes: a=1 b=1\n1 | 1 1\n", 3, "stripe b"),
    ("corep K6 field gf2\nstripes: a=1 b=1\n1 1\n", 3, "separated"),
    ("corep K6 field gf2\nstripes: a=1 b=1\n1 | y\n", 3, "bad entry"),
    ("corep K6 gf2\n", 1, "expected 'corep"),
    ("corep Z1 field gf2\nstripes: a=1\n1\n", 1, "unknown poset"),
    ("corep K6 field gf2\nstripes: a=one\n", 2, "bad stripe"),
    ("corep K6 field gf9\nstripes: a=1\n1\n", 1, "gf9"),
])
def test_corep_errors_carry_line_numbers(text, line, msg):
    with pytest.raises(FormatError, match=msg) as e:
        parse_corep(text, source="t.corep")
    assert e.value.line == line
    assert f"t.corep:{line}:" in str(e.value)


def test_corep_unknown_stripe():
    with pytest.raises(FormatError, match="unknown points"):
        parse_corep("corep K6 field gf2\nstripes: a=1 z=1\n1 | 1\n")


@pytest.mark.parametrize("text,line", [
    ("poset X\npoint a medium\n", 2),
    ("poset X\npoint a weak\nrel a > b\n", 3),
    ("poset X\nedge a b\n", 2),
])
def test_poset_errors(text, line):
    with pytest.raises(FormatError) as e:
        parse_poset(text)
    assert e.value.line == line


def test_poset_missing_header_and_closure_error():
    with pytest.raises(FormatError, match="header"):
        parse_poset("point a weak\n")
    with pytest.raises(FormatError, match="forced strong"):
        parse_poset("poset X\npoint x weak\npoint y weak\npoint z weak\n"
                    "rel x < y weak\nrel y < z strong\nrel x < z weak\n")


def test_comments_are_ignored():
    P = parse_poset("# a comment\nposet K\npoint a weak # trailing\n")
    assert P.ids == ("a",) or list(P.ids) == ["a"]


def test_tsv_round_trip():
    text = write_tsv(("a", "b"), [(1, "x"), (2, "y")])
    assert text.endswith("\n") and "\r" not in text
    assert read_tsv(text) == (["a", "b"], [["1", "x"], ["2", "y"]])
