import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistor_lab.exact_algebra import (
    I,
    ONE,
    ZERO,
    ComplexScalar,
    FieldElement,
    NotInvertible,
    PoleAtPoint,
    PolynomialParseError,
    PolynomialRing,
    UnknownVariable,
    determinant,
    format_scalar,
    identity_matrix,
    inverse_matrix,
    mat_mul,
    nullspace,
    parse_polynomial,
    parse_scalar,
    rank,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(ComplexScalar, fractions, fractions)
R3 = PolynomialRing(("x", "y", "z"))
L = PolynomialRing(("zeta", "w"), laurent=("zeta",))


@st.composite
def polys(draw, ring=R3, max_terms=4, max_deg=3):
    n = len(ring.variables)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        terms[exp] = draw(scalars)
    return FieldElement(terms, ring.variables, ring.laurent)


points = st.fixed_dictionaries({"x": scalars, "y": scalars, "z": scalars})


# --- scalars ---------------------------------------------------------------

def test_complex_scalar_matches_python_complex_on_small_values():
    a, b = ComplexScalar(Fraction(1, 2), 3), ComplexScalar(-2, Fraction(1, 4))
    for op in (lambda u, v: u + v, lambda u, v: u - v, lambda u, v: u * v, lambda u, v: u / v):
        assert complex(op(a, b)) == pytest.approx(op(complex(a), complex(b)))


def test_i_squared_is_minus_one():
    assert I * I == -ONE
    assert (I ** -1) == -I


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.reciprocal() == ONE


@given(scalars)
def test_scalar_format_round_trip(a):
    assert parse_scalar(format_scalar(a)) == a


def test_scalar_rendering():
    assert format_scalar(ComplexScalar(Fraction(1, 2), Fraction(2, 3))) == "1/2+2/3I"
    assert format_scalar(-I) == "-I"
    assert format_scalar(ComplexScalar(Fraction(8, 3))) == "8/3"


def test_reciprocal_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.reciprocal()


# --- polynomials -----------------------------------------------------------

@settings(max_examples=60)
@given(polys(), polys(), points)
def test_evaluation_is_a_ring_homomorphism(p, q, pt):
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p - q).evaluate(pt) == p.evaluate(pt) - q.evaluate(pt)


@settings(max_examples=60)
@given(polys(), polys())
def test_leibniz_rule(p, q):
    assert (p * q).differentiate("x") == p.differentiate("x") * q + p * q.differentiate("x")


@settings(max_examples=60)
@given(polys())
def test_derivative_is_linear_coefficient_of_shift(p):
    # oracle: p(x + h) = p(x) + h p'(x) + O(h^2), computed through substitution
    ring = PolynomialRing(("x", "y", "z", "h"))
    x, h = ring.var("x"), ring.var("h")
    shifted = ring(p).substitute({"x": x + h})
    linear = shifted.coefficients(("h",)).get((1,), ring.zero())
    assert ring(linear) == ring(p.differentiate("x"))


@settings(max_examples=60)
@given(polys(L, max_deg=2))
def test_residue_of_derivative_vanishes(p):
    zeta = L.var("zeta")
    laurent = p * zeta ** -2
    assert laurent.differentiate("zeta").residue("zeta").is_zero()


def test_residue_picks_the_inverse_power():
    p = parse_polynomial("3*zeta^-1*w + zeta^-2 + 5*zeta", ("zeta", "w"), ("zeta",))
    assert p.residue("zeta") == parse_polynomial("3*w", ("w",))


def test_laurent_evaluation_at_pole_raises():
    p = L("zeta^-1")
    with pytest.raises(PoleAtPoint):
        p.evaluate({"zeta": 0, "w": 1})


def test_negative_power_only_for_laurent_variables():
    with pytest.raises(Exception):
        R3.var("x") ** -1


def test_parser_and_printer_agree():
    text = "2*zeta^-1*w0*w1 + w2"
    p = parse_polynomial(text, ("zeta", "w0", "w1", "w2"), ("zeta",))
    assert str(p) == text
    assert parse_polynomial("(x + I*y)^2", ("x", "y")) == parse_polynomial("x^2 + 2*I*x*y - y^2", ("x", "y"))
    assert parse_polynomial("x/2", ("x",)) == FieldElement({(1,): Fraction(1, 2)}, ("x",))


def test_parser_errors():
    with pytest.raises(PolynomialParseError):
        parse_polynomial("x +", ("x",))
    with pytest.raises((PolynomialParseError, UnknownVariable)):
        parse_polynomial("q", ("x",))
    with pytest.raises(PolynomialParseError):
        parse_polynomial("1/x", ("x",))


def test_equality_ignores_variable_order():
    a = parse_polynomial("x*y + 2", ("x", "y"))
    b = parse_polynomial("y*x + 2", ("y", "x"))
    assert a == b and hash(a) == hash(b)


def test_units_and_exact_division():
    zeta = L.var("zeta")
    assert (3 * zeta ** 2).is_unit()
    assert ((3 * zeta ** 2).inverse() * zeta ** 2) == Fraction(1, 3)
    w = L.var("w")
    assert not (w + 1).is_unit()
    with pytest.raises(NotInvertible):
        (w + 1).inverse()
    x, y = R3.var("x"), R3.var("y")
    assert ((x + y) * (x - y)).divide_exact(x - y) == x + y


# --- linear algebra --------------------------------------------------------

def _random_int_matrix(rng, n):
    return [[ComplexScalar(rng.randint(-5, 5)) for _ in range(n)] for _ in range(n)]


@pytest.mark.parametrize("seed", range(10))
def test_determinant_matches_numpy(seed):
    rng = random.Random(seed)
    M = _random_int_matrix(rng, 4)
    expected = round(np.linalg.det(np.array([[float(x.re) for x in row] for row in M])))
    assert determinant(M) == expected


@pytest.mark.parametrize("seed", range(10))
def test_inverse_and_rank_match_numpy(seed):
    rng = random.Random(seed)
    M = _random_int_matrix(rng, 4)
    arr = np.array([[float(x.re) for x in row] for row in M])
    assert rank(M) == np.linalg.matrix_rank(arr)
    if determinant(M) != 0:
        assert mat_mul(M, inverse_matrix(M)) == identity_matrix(4)


def test_nullspace_rank_nullity():
    M = [[ONE, I, ZERO], [I, -ONE, ZERO]]
    basis = nullspace(M)
    assert len(basis) == 3 - rank(M) == 2
    for v in basis:
        assert all(sum((M[r][c] * v[c] for c in range(3)), ZERO) == 0 for r in range(2))


def test_inverse_of_singular_matrix_raises():
    with pytest.raises(NotInvertible):
        inverse_matrix([[ONE, ONE], [ONE, ONE]])
