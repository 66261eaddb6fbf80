from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from epsint.rational import INF, dot, ext_add, format_rational, nullspace, parse_rational, primitive, q, rank


def test_parse_grammar():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-12") == -12
    assert parse_rational("6/8") == Fraction(3, 4)
    for bad in ["1/0", "1.5", "+3", "1/-2", "", "1/02", "a/b"]:
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        q(0.5)
    with pytest.raises(TypeError):
        q(True)


@given(st.fractions())
def test_format_parse_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_format_infinities():
    assert format_rational(INF) == "inf"
    assert format_rational(-INF) == "-inf"


def test_canonical_form():
    x = q("10/4")
    assert (x.numerator, x.denominator) == (5, 2)


def test_extended_addition():
    assert ext_add(Fraction(1), INF) == INF
    assert ext_add(-INF, Fraction(2)) == -INF
    assert ext_add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=5))
def test_primitive_is_positive_rescaling(v):
    p = primitive(v)
    nz = [(a, b) for a, b in zip(v, p) if a != 0]
    if nz:
        ratio = Fraction(nz[0][1]) / nz[0][0]
        assert ratio > 0
        assert all(Fraction(b) == ratio * a for a, b in zip(v, p))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), max_size=3))
def test_nullspace_vectors_are_annihilated(rows):
    basis = nullspace(rows, 3)
    for v in basis:
        assert all(dot(r, v) == 0 for r in rows)
    assert rank(rows, 3) + len(basis) == 3
