from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equigerm.ring import (
    ParseError,
    Polynomial,
    RingSpec,
    format_polynomial,
    parse_polynomial,
)

R2 = RingSpec(("x", "y"))
R3 = RingSpec(("x", "y", "z"))


def poly(text, ring=R2):
    return parse_polynomial(text, ring)


def test_parse_basic_forms():
    assert str(poly("x^2 - 2*x*y + y^2")) == "x^2 - 2*x*y + y^2"
    assert str(poly("(x + y)^2")) == "x^2 + 2*x*y + y^2"
    assert str(poly("x - x")) == "0"
    assert str(poly("3/4 * x")) == "3/4*x"
    assert str(poly("-x")) == "-x"
    assert str(poly("2")) == "2"


def test_power_operator_is_caret():
    assert poly("x^3") == poly("x") * poly("x") * poly("x")
    with pytest.raises(ParseError):
        poly("x**3")


def test_parse_rejects_with_location():
    with pytest.raises(ParseError) as err:
        parse_polynomial("x^2 + ", R2, line=7, column=3)
    assert err.value.line == 7
    with pytest.raises(ParseError):
        poly("x + w")
    with pytest.raises(ParseError):
        poly("x ^ y")


def test_arithmetic_matches_hand_values():
    f = poly("x + y")
    g = poly("x - y")
    assert f * g == poly("x^2 - y^2")
    assert f + g == poly("2*x")
    assert (f - f).is_zero()


def test_derivative():
    f = poly("x^3*y + 2*y^2")
    assert f.derivative("x") == poly("3*x^2*y")
    assert f.derivative("y") == poly("x^3 + 4*y")


def test_substitute_between_rings():
    f = parse_polynomial("x*z + y^2", R3)
    g = f.substitute(R2, {"z": Fraction(2)})
    assert g == poly("2*x + y^2")


def test_constant_helpers():
    c = Polynomial.constant(R2, Fraction(5, 3))
    assert c.constant_term() == Fraction(5, 3)
    v = Polynomial.variable(R2, "y")
    assert v == poly("y")


coeffs = st.builds(
    Fraction, st.integers(-40, 40), st.integers(1, 7)
)
monos = st.tuples(st.integers(0, 5), st.integers(0, 5))


@st.composite
def polynomials(draw, ring=R2):
    terms = draw(st.dictionaries(monos, coeffs, max_size=6))
    p = Polynomial.constant(ring, 0)
    for (a, b), c in terms.items():
        if c == 0:
            continue
        t = Polynomial.constant(ring, c)
        t = t * Polynomial.variable(ring, "x") ** a
        t = t * Polynomial.variable(ring, "y") ** b
        p = p + t
    return p


@given(polynomials())
@settings(max_examples=60, deadline=None)
def test_format_parse_round_trip(p):
    assert parse_polynomial(format_polynomial(p), R2) == p


@given(polynomials(), polynomials(), polynomials())
@settings(max_examples=40, deadline=None)
def test_ring_distributivity(f, g, h):
    assert f * (g + h) == f * g + f * h


@given(polynomials(), polynomials())
@settings(max_examples=40, deadline=None)
def test_derivative_product_rule(f, g):
    lhs = (f * g).derivative("x")
    rhs = f.derivative("x") * g + f * g.derivative("x")
    assert lhs == rhs
