from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eqposets.fields import (FieldError, GElem, conjugates, enumerate_monic, format_elem, format_poly,
                             frobenius_companion, g_arith, make_tower, parse_elem, parse_poly, preset)


def test_presets_are_duality_enabled(gf2, qs2):
    assert gf2.char == 2 and gf2.duality_enabled
    assert qs2.char == 0 and qs2.duality_enabled


def test_reducible_polynomial_names_root():
    with pytest.raises(FieldError, match="root 1"):
        make_tower(2, 0, 1)


def test_xi_squared(gf2, qs2):
    assert gf2.xi * gf2.xi == parse_elem(gf2, "1+x")
    assert (qs2.g(1, 1) * qs2.g(1, -1)) == qs2.g(-1, 0)


def test_additive_identity(gf2):
    z = parse_elem(gf2, "1+x")
    assert g_arith("add", z, GElem(gf2)) == z


def test_inverse_of_zero_raises(qs2):
    with pytest.raises(FieldError):
        g_arith("inv", GElem(qs2))


def test_conjugates(gf2, qs2):
    hat, bar, re, im = conjugates(qs2.g(3, 2))
    assert hat == qs2.g(3, -2) and re == 3 and im == 2
    assert conjugates(parse_elem(gf2, "1+x"))[1] == gf2.xi
    z = qs2.g(Fraction(5, 3), 0)
    assert z.hat() == z.bar() == z


def test_companion_examples(gf2):
    assert frobenius_companion(gf2, [parse_elem(gf2, "0")]).shape == (1, 1, 2)
    m = frobenius_companion(gf2, parse_poly(gf2, "t^2+1"), f_only=True)
    assert np.array_equal(m[..., 0], [[0, 1], [1, 0]]) and not m[..., 1].any()
    m = frobenius_companion(gf2, parse_poly(gf2, "t^2+x"))
    assert gf2.entry(m, 1, 0) == gf2.xi  # -xi = xi in char 2
    with pytest.raises(FieldError):
        frobenius_companion(gf2, parse_poly(gf2, "t+x"), f_only=True)


def test_enumerate_monic_counts(gf2):
    assert [format_poly(c) for c in enumerate_monic(gf2, 1)] == ["t", "t+1"]
    assert len(enumerate_monic(gf2, 1, "G")) == 4
    assert len(enumerate_monic(gf2, 2)) == 4


@pytest.mark.parametrize("text", ["0", "1", "x", "1+x", "3/2-5*x", "-x"])
def test_element_syntax_round_trip(qs2, text):
    z = parse_elem(qs2, text)
    assert parse_elem(qs2, format_elem(z)) == z


def test_poly_round_trip(gf2):
    for c in enumerate_monic(gf2, 2, "G"):
        assert tuple(parse_poly(gf2, format_poly(c))) == tuple(c)


rat = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@given(rat, rat, rat, rat, rat, rat)
def test_field_axioms_qsqrt2(a, b, c, d, e, f):
    T = preset("qsqrt2")
    x, y, z = T.g(a, b), T.g(c, d), T.g(e, f)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if not x.is_zero():
        assert x * x.inv() == T.g(1, 0)
    assert (x * y).hat() == x.hat() * y.hat()


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_gf3_tower_inverse(a, b, c, d):
    T = preset("gf3")
    x, y = T.g(a, b), T.g(c, d)
    if not y.is_zero():
        assert (x / y) * y == x
