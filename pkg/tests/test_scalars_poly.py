from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqbundle.errors import DimensionError
from eqbundle.poly import Poly, monomials_up_to
from eqbundle.scalars import I, ONE, ZERO, Scalar, as_scalar
from strategies import nonzero_scalars, points, polys, scalars


def test_scalar_arithmetic_by_hand():
    a, b = Scalar(1, 2), Scalar(3, -1)
    assert a * b == Scalar(5, 5)
    assert a / b == Scalar(Fraction(1, 10), Fraction(7, 10))
    assert I * I == -1
    assert str(Scalar(Fraction(-1, 2))) == "-1/2"
    assert str(Scalar(1, 2)) == "1+2*i"
    assert str(Scalar(0, -1)) == "-i"


def test_quad_round_trip_and_lowest_terms():
    s = Scalar.from_quad(4, -6, 3, 9)
    assert s.to_quad() == (-2, 3, 1, 3)
    assert Scalar.from_quad(*s.to_quad()) == s
    with pytest.raises(ZeroDivisionError):
        Scalar.from_quad(1, 0, 0, 1)


def test_scalar_conversions():
    assert as_scalar(0.5) == Scalar(Fraction(1, 2))
    assert as_scalar(1 + 2j) == Scalar(1, 2)
    assert float(Scalar(3, 0)) == 3.0
    with pytest.raises(TypeError):
        float(I)
    with pytest.raises(TypeError):
        as_scalar("1")
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_scalar_is_immutable():
    s = Scalar(1)
    with pytest.raises(AttributeError):
        s.x = 2


@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert hash(a + b) == hash(b + a)


@given(scalars, nonzero_scalars)
def test_scalar_division_inverts_multiplication(a, b):
    assert (a / b) * b == a
    assert (a * b) / b == a


@given(nonzero_scalars, st.integers(-3, 3))
def test_scalar_powers(a, n):
    expected = ONE
    for _ in range(abs(n)):
        expected = expected * a
    if n < 0:
        expected = ONE / expected
    assert a ** n == expected


def test_poly_canonical_zero():
    x = Poly.var(2, 0)
    p = (x + 1) - (x + 1)
    assert p.is_zero()
    assert dict(p.terms) == {}
    assert Poly(2, {(1, 0): 0}) == Poly.zero(2)


def test_poly_by_hand():
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    p = x * x * y - 3 * y + 1
    assert p.render(["x", "y"]) == "x^2*y - 3*y + 1"
    assert p.diff(0) == 2 * x * y
    assert p.eval([2, 5]) == 20 - 15 + 1
    assert p.degree() == 3
    assert (x + 1) ** 2 == x * x + 2 * x + 1
    assert p.coeff((2, 1)) == 1


def test_poly_var_count_mismatch():
    with pytest.raises(DimensionError):
        Poly.var(2, 0) + Poly.var(3, 0)


@settings(max_examples=60)
@given(polys(2), polys(2), polys(2))
def test_poly_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@settings(max_examples=60)
@given(polys(2), polys(2), points(2))
def test_poly_eval_is_a_ring_homomorphism(p, q, pt):
    assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)
    assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)


@settings(max_examples=60)
@given(polys(3), polys(3), st.integers(0, 2))
def test_poly_leibniz_rule(p, q, i):
    assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


@settings(max_examples=60)
@given(polys(2), st.integers(0, 1))
def test_integrate_then_diff_is_identity(p, i):
    assert p.integrate(i).diff(i) == p
    assert p.integrate(i).substitute(i, 0).is_zero()


@settings(max_examples=40)
@given(polys(2), polys(2), polys(2), points(2))
def test_compose_evaluates_through_substitution(p, f, g, pt):
    inner = (f.eval(pt), g.eval(pt))
    assert p.compose([f, g]).eval(pt) == p.eval(inner)


@given(polys(2))
def test_compose_with_identity(p):
    assert p.compose([Poly.var(2, 0), Poly.var(2, 1)]) == p


@given(st.integers(1, 4), st.integers(0, 4))
def test_monomial_count(n, d):
    monos = monomials_up_to(n, d)
    assert len(monos) == comb(n + d, d)
    assert len(set(monos)) == len(monos)
    assert [sum(m) for m in monos] == sorted(sum(m) for m in monos)
