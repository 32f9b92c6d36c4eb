import numpy as np
import pytest

from eqposets import catalog
from eqposets.catalog import CatalogError
from eqposets.corep import dim_vector, is_indecomposable, is_reduced, spaces_of
from eqposets.fields import frobenius_companion, parse_elem, parse_poly
from eqposets.io import format_corep
from eqposets.tits import tits_form

from conftest import mc


def rows_of(M):
    return format_corep(M).splitlines()[2:]


def test_finite_type_examples(gf2):
    assert rows_of(catalog.finite_type_corep("F17", tower=gf2)) == ["1 | x"]
    assert rows_of(catalog.finite_type_corep("F13", "B", gf2)) == ["1 x"]
    assert rows_of(catalog.finite_type_corep("F15", "G", gf2)) == ["0 0 | 1 x | 1 0", "1 0 | 0 0 | 0 x",
                                                                 "0 1 | 0 0 | 1 1"]
    with pytest.raises(CatalogError):
        catalog.finite_type_corep("F15", "Z", gf2)


def test_fifteen_listed_finite_matrices():
    assert len(catalog.finite_type_names()) == 15


def test_k6_examples(gf2):
    assert rows_of(catalog.k6_series(1, gf2.garray([["0"]]), gf2)) == ["1 | x"]
    assert rows_of(catalog.k6_discrete(1, gf2)) == ["1 | 1"]
    X = frobenius_companion(gf2, parse_poly(gf2, "t^2+t+1"), f_only=True)
    assert rows_of(catalog.k6_series(2, X, gf2)) == ["1 0 | x 1", "0 1 | 1 1+x"]
    with pytest.raises(CatalogError):
        catalog.k6_series(1, gf2.garray([["x"]]), gf2)


def test_k7_example(gf2):
    assert rows_of(catalog.k7_series(1, gf2.garray([["1"]]), gf2)) == ["1 | 1 | 1 | 1", "1 | x | 0 | 0"]


def test_k8_examples(gf2, qs2):
    assert rows_of(catalog.k8_series("char2", 1, gf2.garray([["x"]]), gf2)) == ["1 | 0 | x 1", "0 | 1 | 1+x 1"]
    # xi-bar + xi * lambda-bar with lambda = 3 + xi, xi^2 = 2
    assert rows_of(catalog.k8_series("separable", 1, qs2.garray([["3+x"]]), qs2)) == \
        ["1 | 0 | x 1", "0 | 1 | -2+2*x 4-x"]


def test_k8_variant_checks(gf2, qs2):
    with pytest.raises(CatalogError):
        catalog.k8_series("char2", 1, qs2.garray([["1"]]), qs2)
    with pytest.raises(CatalogError):
        catalog.k8_series("separable", 1, gf2.garray([["1"]]), gf2)
    with pytest.raises(CatalogError):
        catalog.k8_series("inseparable", 1, gf2.garray([["1"]]), gf2)


def test_scalar_template_entry(gf2):
    spec = catalog.SeriesSpec("K6", {"a": [[("lin", 1, 0)]], "b": [[("lin", "x", 1)]]}, "free-G", None, 1)
    X = gf2.garray([["0", "1", "0"], ["0", "0", "1"], ["1", "0", "0"]])
    M = catalog.series_instantiate(spec, X, gf2)
    b = M.stripes["b"]
    assert np.array_equal(b[..., 0], X[..., 0]) and np.array_equal(b[..., 1], np.eye(3, dtype=b.dtype))


def test_sincere_dims_examples():
    for k in range(1, 6):
        d, f = catalog.sincere_dims("A41", k)
        assert d.d0 == k + 1 and sorted(d.values[1:]) == sorted([1, k, k, 1]) and f == 1
        d, f = catalog.sincere_dims("A28", k)
        assert d.d0 == 2 * k + 1 and sorted(d.values[1:]) == sorted([1, 2 * k, 1, 2 * k]) and f == 2
    d, f = catalog.sincere_dims("A45", 1)
    assert d.values == (3, 1, 2, 2, 1) and f == 4
    with pytest.raises(CatalogError):
        catalog.sincere_dims("A41", 0)


def test_dim_table_examples():
    r = catalog.dim_table("A25").row(4)
    assert r.f == 2 and r.d.values == (1, 2, 0, 1)
    assert catalog.dim_table("K7").mu.values == (2, 1, 1, 1, 1)
    r = catalog.dim_table("K9").row(22)
    assert r.f == 2 and r.d.values == (3, 2, 2, 0, 1)
    with pytest.raises(CatalogError):
        catalog.dim_table("A99")


def test_table_sizes():
    assert len(catalog.dim_table("K7").rows) == 48
    assert len(catalog.dim_table("K9").rows) == 48


def test_table2_first_row(gf2):
    M = catalog.table2_coreps(gf2)["4(K6-4)"]
    assert [str(M.entry("a", 0, j)) for j in range(4)] in (["1", "x", "0", "0"],
                                                          [str(parse_elem(gf2, e)) for e in ("1", "x", "0", "0")])


def test_table3_collision_flagged():
    rows = catalog.table3_initials()
    assert len(rows) == 3
    assert sum(1 for r in rows if r.flagged) == 1


@pytest.mark.parametrize("name", catalog.finite_type_names())
def test_finite_types_reduced_indecomposable(gf2, name):
    M = catalog.finite_type_corep(name, tower=gf2)
    U = spaces_of(M)
    assert is_reduced(M) and is_indecomposable(U)
    assert tits_form(M.poset, dim_vector(U)) == catalog.FINITE_F[name]


def test_unknown_poset():
    with pytest.raises(KeyError):
        catalog.catalog_poset("Z9")


def test_starred_names_are_duals():
    from eqposets.poset import dual_poset
    A = catalog.catalog_poset("A38")
    assert catalog.catalog_poset("A38*").leq.tolist() == dual_poset(A).leq.tolist()
