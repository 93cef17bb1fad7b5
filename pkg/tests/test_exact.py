import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diractori.exact import (ExactComplex, IncompatibleFields, QuadraticScalar, is_squarefree,
                             parse_exact_complex, parse_scalar, squarefree_decomposition)

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)
ds = st.sampled_from([1, 2, 3, 5, 6, 7])


@st.composite
def scalars_same_field(draw, count=3):
    d = draw(ds)
    return [QuadraticScalar(draw(rats), draw(rats), d) for _ in range(count)]


def test_squarefree():
    assert squarefree_decomposition(72) == (6, 2)
    assert squarefree_decomposition(1) == (1, 1)
    assert is_squarefree(30) and not is_squarefree(12)


@given(st.integers(1, 10 ** 6))
def test_squarefree_reconstructs(n):
    k, s = squarefree_decomposition(n)
    assert k * k * s == n and is_squarefree(s)


@given(scalars_same_field())
def test_field_axioms(xs):
    a, b, c = xs
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0
    if a != 0:
        assert (b / a) * a == b


@given(scalars_same_field(2))
def test_order_matches_float(xs):
    a, b = xs
    fa, fb = float(a), float(b)
    if abs(fa - fb) > 1e-9:
        assert (a < b) == (fa < fb)
    assert (a.sign() > 0) == (float(a) > 0) or abs(float(a)) < 1e-12


def test_sign_of_close_values():
    # Pell convergents straddle sqrt(2)
    assert QuadraticScalar(Fraction(1393, 985), -1, 2).sign() < 0
    assert QuadraticScalar(Fraction(3363, 2378), -1, 2).sign() > 0
    assert QuadraticScalar(Fraction(3363, 2378), -1, 2) > 0


def test_sqrt_squared_is_rational():
    r = QuadraticScalar(0, 1, 2)
    assert r * r == 2 and (r * r).is_rational
    with pytest.raises(ValueError):
        r.rational()


def test_incompatible_fields():
    with pytest.raises(IncompatibleFields):
        QuadraticScalar(0, 1, 2) + QuadraticScalar(0, 1, 3)


@pytest.mark.parametrize("text, expected", [
    ("3", QuadraticScalar(3)),
    ("1/2", QuadraticScalar(Fraction(1, 2))),
    ("0.25", QuadraticScalar(Fraction(1, 4))),
    ("sqrt(2)", QuadraticScalar(0, 1, 2)),
    ("sqrt(8)", QuadraticScalar(0, 2, 2)),
    ("1+sqrt(2)", QuadraticScalar(1, 1, 2)),
    ("1-sqrt(3)/2", QuadraticScalar(1, Fraction(-1, 2), 3)),
    ("2/3*sqrt(5)", QuadraticScalar(0, Fraction(2, 3), 5)),
    ("sqrt(4)", QuadraticScalar(2)),
])
def test_parse_scalar(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("text", ["", "abc", "sqrt(2", "1++2x", "sqrt(-2)"])
def test_parse_scalar_rejects(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_parse_scalar_field_restriction():
    with pytest.raises(ValueError):
        parse_scalar("sqrt(3)", d=2)


@given(scalars_same_field(1))
def test_str_round_trip(xs):
    (a,) = xs
    assert parse_scalar(str(a)) == a


def test_parse_complex():
    assert parse_exact_complex("i") == ExactComplex(0, 1)
    assert parse_exact_complex("-2i") == ExactComplex(0, -2)
    z = parse_exact_complex("1/2+sqrt(3)/2*i")
    assert z == ExactComplex(Fraction(1, 2), QuadraticScalar(0, Fraction(1, 2), 3))
    assert z.norm_sq() == 1
    assert abs(complex(z) - complex(0.5, math.sqrt(3) / 2)) < 1e-15


def test_complex_products():
    u, v = ExactComplex(1, 2), ExactComplex(-2, 1)
    assert u.dot(v) == 0 and u.cross(v) == 5
    assert (u + v) - v == u
