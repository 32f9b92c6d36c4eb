import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eqposets.fields import parse_elem
from eqposets.subspace import FSub, SubspaceError, all_subspaces, cohull, hull, lattice, perp, span


def gv(T, *entries):
    return [[(z.re, z.im) for z in (parse_elem(T, e) for e in entries)]]


def test_span_examples(gf2):
    U = span(gf2, 2, gv(gf2, "1", "0"))
    assert U.dim == 1 and not U.is_strong
    G = span(gf2, 2, gv(gf2, "1", "0"), "G")
    assert G.dim == 2 and G.is_strong
    assert span(gf2, 2, []).dim == 0


def test_hull_cohull_examples(gf2):
    U = span(gf2, 2, gv(gf2, "1", "0"))
    assert hull(U).dim == 2 and hull(U) == span(gf2, 2, gv(gf2, "1", "0"), "G")
    assert cohull(U).dim == 0
    S = span(gf2, 2, gv(gf2, "1", "0") + gv(gf2, "x", "0"))
    assert cohull(S) == S


def test_lattice_examples(gf2):
    U = span(gf2, 2, gv(gf2, "1", "0"))
    V = span(gf2, 2, gv(gf2, "x", "0"))
    assert lattice("intersect", U, V).dim == 0
    assert lattice("contains", hull(U), U)
    assert lattice("sum", U, V) == hull(U)
    with pytest.raises(SubspaceError):
        lattice("xor", U, V)


def test_perp_examples(gf2, qs2):
    for T in (gf2, qs2):
        U = span(T, 1, gv(T, "1"))
        P = perp(U)
        assert P.dim == 1 and P == span(T, 1, gv(T, "x"))
        assert perp(FSub.zero(T, 2)) == FSub.full(T, 2)
        assert perp(FSub.full(T, 2)).dim == 0


def test_ambient_mismatch(gf2):
    with pytest.raises(SubspaceError):
        FSub.zero(gf2, 1) + FSub.zero(gf2, 2)


def test_subspace_counts(gf2):
    # Gaussian binomials over GF(2): 2-dim space has 5 subspaces, 4-dim has 67
    assert len(all_subspaces(gf2, 1)) == 5
    assert len(all_subspaces(gf2, 2)) == 67


def test_image_under_g_matrix(gf2):
    T = gf2
    U = span(T, 2, gv(T, "1", "x"))
    R = T.garray([["0", "1"], ["1", "0"]])
    assert U.image(T.realize(R)) == span(T, 2, gv(T, "x", "1"))


q_entries = st.sampled_from(["0", "1", "-1", "x", "2-x", "1/2+x", "3x"])


@given(st.lists(st.tuples(q_entries, q_entries), min_size=0, max_size=4))
def test_qsqrt2_perp_laws(vecs):
    from eqposets.fields import qsqrt2_tower
    T = qsqrt2_tower()
    rows = [gv(T, a, b)[0] for a, b in vecs]
    U = span(T, 2, rows)
    assert U.dim + perp(U).dim == 4
    assert perp(perp(U)) == U
    assert perp(cohull(U)) == hull(perp(U))
    assert hull(U).contains(U) and U.contains(cohull(U))
    assert hull(U).is_strong and cohull(U).is_strong
