import pytest

from eqposets import catalog, verify as V
from eqposets.corep import CorepSpaces, are_isomorphic, dual_corep, spaces_of, trivial_corep
from eqposets.subspace import FSub
from eqposets.tits import DimVector, classify_vector

from conftest import sp

P = catalog.catalog_poset
K6W = {"a": 1, "b": 1}


def k6(d0, a, b):
    return DimVector.of(P("K6"), d0, {"a": a, "b": b})


def test_oracle_k6_unit(gf2):
    r = V.oracle_classes(P("K6"), k6(1, 1, 1), gf2)
    assert r.count == 3
    expected = [sp("K6", K6W, [["1", e]], gf2) for e in ("1", "x", "1+x")]
    for U in expected:
        assert sum(are_isomorphic(U, R) for R in r.reps) == 1


def test_oracle_small_counts(gf2):
    assert V.oracle_classes(P("K6"), k6(1, 1, 0), gf2).count == 1
    r = V.oracle_classes(P("K6"), k6(1, 2, 2), gf2)
    assert r.count == 1
    # the dual of the trivial corepresentation: both spaces are all of G
    full = CorepSpaces(P("K6"), gf2, 1, {"a": FSub.full(gf2, 1), "b": FSub.full(gf2, 1)})
    assert are_isomorphic(r.reps[0], full)


def test_capacity_bound(gf2):
    d = k6(1, 3, 0)
    assert classify_vector(P("K6"), d).tag == "Other"
    assert V.oracle_classes(P("K6"), d, gf2).count == 0


def test_literal_cross_check(gf2):
    for d in (k6(1, 1, 1), k6(1, 2, 1), k6(2, 1, 1)):
        assert V.literal_classes(P("K6"), d, gf2) == V.oracle_classes(P("K6"), d, gf2).count


def test_budget_marks_skipped(gf2):
    r = V.oracle_classes(P("K6"), k6(2, 2, 2), gf2, budget=5)
    assert r.skipped


def test_oracle_determinism(gf2):
    a = V.brute_force_indecomposables(P("K6"), 1, gf2, threads=1)
    b = V.brute_force_indecomposables(P("K6"), 1, gf2, threads=1)
    c = V.brute_force_indecomposables(P("K6"), 1, gf2, threads=2)
    for m in (b, c):
        assert a.keys() == m.keys()
        for d in a:
            assert a[d].count == m[d].count
            assert [R.key() for R in a[d].reps] == [R.key() for R in m[d].reps]


def test_theorem_d_k6_small_box():
    rep = V.verify_theorem_d(P("K6"), 1)
    assert rep.passed, rep.failures


def test_series_examples(gf2):
    S0 = spaces_of(catalog.k6_series(1, gf2.garray([["0"]]), gf2))
    S1 = spaces_of(catalog.k6_series(1, gf2.garray([["1"]]), gf2))
    assert not are_isomorphic(S0, S1) and are_isomorphic(S0, S0)
    T0 = spaces_of(catalog.k7_series(1, gf2.garray([["0"]]), gf2))
    T1 = spaces_of(catalog.k7_series(1, gf2.garray([["1"]]), gf2))
    assert not are_isomorphic(T0, T1)


def test_series_separation_reports():
    assert V.verify_series_separation("K6", 1).passed
    assert V.verify_series_separation("K8", 1).passed


def test_k8_pencil_oracle_agrees_with_corep_machinery(gf2):
    from eqposets.corep import indecomposability
    for c, X in catalog.companion_blocks(gf2, 1, "G"):
        M = catalog.k8_series("char2", 1, X, gf2)
        assert V.k8_pencil_local(M) == (indecomposability(spaces_of(M)).status == "indecomposable")


def test_k8_case3_reported_only_for_some_parameters(gf2):
    xi = catalog.k8_series("char2", 1, gf2.garray([["x"]]), gf2)
    one = catalog.k8_series("char2", 1, gf2.garray([["1"]]), gf2)
    assert all(V.k8_case3(spaces_of(xi)).values())
    assert not all(V.k8_case3(spaces_of(one)).values())


def test_catalog_report_rows(gf2):
    rep = V.verify_catalog(gf2, k6_max=1)
    rows = {r[0]: r for r in rep.rows}
    assert rows["F17 f"][3] == "pass"
    assert rows["F17 boundary conditions"][3] == "pass"
    assert any("self-dual" in k and v[3] == "pass" for k, v in rows.items())
    assert rep.passed


def test_tits_tables_rows():
    rep = V.verify_tits_tables()
    rows = {r[0]: r for r in rep.rows}
    a25 = next(v for k, v in rows.items() if k.startswith("A25 T=1 "))
    assert a25[1:] == ("1", "1", "pass")
    assert any(k.startswith("K9 mu") and v[3] == "pass" for k, v in rows.items())


def test_duality_suite_k6():
    assert V.verify_duality_suite(P("K6"), 1).passed


def test_duality_trivial(gf2):
    T = trivial_corep(P("K6"), gf2)
    assert are_isomorphic(dual_corep(dual_corep(T)), T)


def test_oracle_catalog_consistency(gf2):
    res = V.brute_force_indecomposables(P("K6"), 1, gf2, threads=1)
    coreps = [("K6-5 n=1", spaces_of(catalog.k6_discrete(1, gf2))),
              ("S(t)", spaces_of(catalog.k6_series(1, gf2.garray([["0"]]), gf2)))]
    assert V.oracle_catalog_consistency(P("K6"), res, coreps).passed


def test_report_tsv():
    r = V.Report("x")
    r.add("c1", 1, 1)
    r.add("c2", 1, 2)
    assert not r.passed and len(r.failures) == 1
    assert r.tsv().splitlines()[0] == "case\texpected\tcomputed\tstatus"
    assert "FAIL" in r.summary()
