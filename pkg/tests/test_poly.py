import numpy as np
import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from oscillab.poly import ParseError, Polynomial, parse


def test_parse_basic():
    p = parse("x1^2 + 3*x2", 2)
    assert p.terms == {(2, 0): Fraction(1), (0, 1): Fraction(3)}


def test_parse_rational_and_decimal_coefficients():
    p = parse("1/2*x1 + 0.25*x2", 2)
    assert p.terms == {(1, 0): Fraction(1, 2), (0, 1): Fraction(1, 4)}


def test_parse_parentheses_and_expansion():
    p = parse("(x1 - x2)^2", 2)
    assert p.terms == {(2, 0): Fraction(1), (1, 1): Fraction(-2), (0, 2): Fraction(1)}


def test_parse_unary_minus():
    p = parse("-x1 + x2", 2)
    assert p.terms[(1, 0)] == -1


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse("x1 + @", 2)
    assert exc.value.position in (4, 5)  # scanner may point at the space before '@'
    with pytest.raises(ParseError):
        parse("x3", 2)          # variable out of range
    with pytest.raises(ParseError):
        parse("x1^(1/2)", 2)    # fractional exponent
    with pytest.raises(ParseError):
        parse("x1 + ", 2)


def test_cancellation_removes_terms():
    p = parse("x1 - x1", 1)
    assert p.is_zero()


def test_ring_ops():
    x1 = Polynomial.variable(2, 1)
    x2 = Polynomial.variable(2, 2)
    p = (x1 + x2) * (x1 - x2)
    assert p == parse("x1^2 - x2^2", 2)
    assert (x1 + x2) ** 3 == parse("x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3", 2)


def test_partial_derivative():
    p = parse("x1^3*x2 + x2^2", 2)
    assert p.partial(1) == parse("3*x1^2*x2", 2)
    assert p.partial(2) == parse("x1^3 + 2*x2", 2)


def test_evaluate_scalar_and_array():
    p = parse("x1^2 + 2*x2", 2)
    assert p.evaluate([3.0, 4.0]) == pytest.approx(17.0)
    xs = np.array([0.0, 1.0, 2.0])
    out = p.evaluate([xs, xs])
    assert np.allclose(out, xs**2 + 2 * xs)


def test_homogeneous_degree():
    assert parse("x1^4 + x2^4", 2).homogeneous_degree() == 4
    assert parse("x1^2 + x2^4", 2).homogeneous_degree() is None
    with pytest.raises(ValueError):
        Polynomial.zero(2).homogeneous_degree()


def test_involution_pullback():
    p = parse("x1^3 + x1*x2 + 1", 2)
    q = p.involution_pullback()
    assert q == parse("-x1^3 + x1*x2 + 1", 2)
    assert q.involution_pullback() == p


def test_restrict_to_weights():
    p = parse("x1^2 + x2^4 + x1*x2^3", 2)
    face = p.restrict_to_weights([Fraction(1, 2), Fraction(1, 4)], 1)
    assert face == parse("x1^2 + x2^4", 2)
    with pytest.raises(ValueError):
        p.restrict_to_weights([Fraction(1), Fraction(1)], 1)  # terms below level


def test_substitute_one():
    p = parse("x1^4 + x2^4", 2)
    assert p.substitute_one(1) == parse("1 + x1^4", 1)
    assert p.substitute_one(2) == parse("x1^4 + 1", 1)


def test_str_is_parseable_normal_form():
    p = parse("x2^4 + 2*x1*x2 - 1/3", 2)
    assert parse(str(p), 2) == p


@st.composite
def polynomials(draw, n=2, max_terms=5, max_exp=4):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        exp = tuple(draw(st.integers(0, max_exp)) for _ in range(n))
        coeff = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 5)))
        terms[exp] = coeff
    return Polynomial(n, terms)


@given(polynomials())
@settings(max_examples=60, deadline=None)
def test_text_round_trip(p):
    assert parse(str(p), p.n) == p


@given(polynomials(), st.lists(st.floats(-2, 2), min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_gradient_matches_central_differences(p, point):
    h = 1e-6
    _, grad = p.evaluate_and_gradient(point)
    for i in range(2):
        lo = list(point)
        hi = list(point)
        lo[i] -= h
        hi[i] += h
        fd = (p.evaluate(hi) - p.evaluate(lo)) / (2 * h)
        assert grad[i] == pytest.approx(fd, abs=1e-4, rel=1e-4)


@given(polynomials(), polynomials())
@settings(max_examples=40, deadline=None)
def test_product_evaluation_homomorphism(p, q):
    point = [0.7, -1.3]
    assert (p * q).evaluate(point) == pytest.approx(
        p.evaluate(point) * q.evaluate(point), rel=1e-9, abs=1e-9
    )
