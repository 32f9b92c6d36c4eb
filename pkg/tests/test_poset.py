import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eqposets import catalog
from eqposets.io import format_poset, parse_poset
from eqposets.poset import (ContradictionError, PosetError, build_poset, cone, critical_occurrences,
                            critical_posets, disjoint_union, dual_poset, n_set, one_parameter_criterion,
                            poset_iso, sincere_class, structure_predicates, weight)

P = catalog.catalog_poset


def test_fig1_closure():
    F = P("Fig1")
    rels = set(F.strict_relations())
    weak = {(x, y) for x, y, k in rels if k == "weak"}
    strong = {(x, y) for x, y, k in rels if k == "strong"}
    assert weak == {("a", "b"), ("b", "c"), ("c", "d"), ("a", "c")}
    assert strong == {("b", "d"), ("alpha", "b"), ("alpha", "c"), ("alpha", "d"),
                      ("a", "d"), ("a", "e"), ("a", "beta"), ("e", "beta")}


def test_fig1_weight_and_chains():
    F = P("Fig1")
    assert weight(F) == 4
    assert cone(F, ["alpha"], "∨") | cone(F, ["beta"], "∧") == set(F.ids)


def test_fig1_incomparables_of_e():
    # alpha is incomparable with e as well
    assert n_set(P("Fig1"), ["e"]) == {"alpha", "b", "c", "d"}


def test_single_strong_point():
    Q = build_poset("one", [("s", "strong")], [])
    assert len(Q) == 1 and weight(Q) == 1


def test_closure_law_contradiction():
    with pytest.raises(ContradictionError):
        build_poset("bad", [("x", "weak"), ("y", "weak"), ("z", "weak")],
                    [("x", "y", "weak"), ("y", "z", "strong"), ("x", "z", "weak")])


def test_cycle_rejected():
    with pytest.raises(PosetError, match="cycle"):
        build_poset("c", [("x", "strong"), ("y", "strong")], [("x", "y"), ("y", "x")])


def test_weights():
    assert weight(P("K6")) == 4
    assert all(weight(P(k)) <= 4 for k in ("K6", "K7", "K8", "K9"))


def test_n_set_examples():
    assert n_set(P("K8"), ["a"]) == {"rho", "sigma"}
    chain = P("F17")
    assert n_set(chain, [chain.ids[-1]]) == set()


def test_cones():
    K7 = P("K7")
    assert cone(K7, list(K7.ids), "∨") == set(K7.ids)
    assert cone(K7, ["a"], "▽") == set()
    with pytest.raises(PosetError):
        cone(K7, ["a"], "sideways")


def test_structure_predicates():
    f = structure_predicates(P("K6"))
    assert f["dyad"] and f["antichain"]
    g = structure_predicates(P("K7"), ["a", "p", "q"])
    assert g["chain"] and g["completely_weak"]
    pts = [(x, "strong") for x in "abcd"]
    gens = [(x, y, "strong") for x in "ab" for y in "cd"]
    assert structure_predicates(build_poset("g", pts, gens))["garland"]


def test_isomorphisms():
    assert poset_iso(P("A25"), dual_poset(P("A25")), anti=True) is not None
    assert poset_iso(P("K6"), P("F17")) is None
    K8 = P("K8")
    R = K8.relabel({"a": "w", "rho": "rho", "sigma": "sigma"})
    iso = poset_iso(R, K8)
    assert iso is not None and iso["w"] == "a"


def test_critical_occurrences():
    K7 = P("K7")
    assert critical_occurrences(K7) == [("K7", frozenset(K7.ids))]
    assert critical_occurrences(P("A25")) == [("K6", frozenset({"a", "b"}))]
    assert critical_occurrences(P("F17")) == []


def test_criterion_strings():
    assert str(one_parameter_criterion(P("K6"))) == "OneParameter (1 critical occurrence: K6)"
    assert one_parameter_criterion(P("F17")).status == "FiniteTypeCandidate"
    r = one_parameter_criterion(disjoint_union(P("K6"), P("K8")))
    assert r.status == "NotOneParameter" and r.count >= 2


def test_wide_poset_with_one_critical_is_undetermined():
    Q = build_poset("w5", [("a", "weak"), ("b", "weak"), ("s", "strong")], [])
    assert weight(Q) == 5
    assert one_parameter_criterion(Q).status == "Undetermined"
    Z = build_poset("z", [("a", "weak"), ("b", "weak"), ("c", "weak")],
                    [("a", "b", "weak"), ("b", "c", "weak")])
    assert one_parameter_criterion(Z).status == "FiniteTypeCandidate"


def test_sincere_class_examples():
    A25s = build_poset("x", [("a", "weak"), ("eta", "strong"), ("b", "weak")], [("eta", "b", "strong")])
    assert sincere_class(A25s) == ("A25", "anti")
    assert sincere_class(P("K9")) == ("K9", "iso")
    assert sincere_class(P("F17")) is None


def test_dual_of_a25_is_a25_star():
    D = dual_poset(P("A25"))
    assert D.is_strong_rel("eta", "b") and not D.le("b", "eta")
    assert poset_iso(D, P("A25*")) is not None


@pytest.mark.parametrize("pid", list(catalog.SINCERE_IDS) + ["Fig1"] + list(catalog.FINITE_IDS))
def test_poset_format_round_trip(pid):
    Q = P(pid)
    R = parse_poset(format_poset(Q))
    assert R == Q


def _random_poset(draw_bits, n):
    pts = [(f"p{i}", "strong" if draw_bits[i] else "weak") for i in range(n)]
    gens = []
    k = n
    for i, j in itertools.combinations(range(n), 2):
        if draw_bits[k % len(draw_bits)]:
            gens.append((f"p{i}", f"p{j}", None))
        k += 1
    return build_poset("r", pts, gens)


@given(st.lists(st.booleans(), min_size=12, max_size=12), st.integers(2, 5))
def test_closure_invariants(bits, n):
    Q = _random_poset(bits, n)
    L, S = Q.leq, Q.strong
    assert (L & L.T == np.eye(n, dtype=bool)).all()
    assert ((L.astype(int) @ L.astype(int) > 0) <= L).all()
    # closure law: x <= y strong-related to z forces x strong to z, both directions
    LS = (L.astype(int) @ S.astype(int)) > 0
    SL = (S.astype(int) @ L.astype(int)) > 0
    assert (LS <= S).all() and (SL <= S).all()
    D = dual_poset(dual_poset(Q))
    assert (D.leq == L).all() and (D.strong == S).all()
