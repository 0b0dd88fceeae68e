import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqbundle.calculus import (
    Chart,
    InvariantField,
    LieValuedOneForm,
    LieValuedTwoForm,
    VectorField,
    contract,
    current_vertical_sign,
    differential,
    exterior_derivative,
    invariant_bracket,
    pullback_oneform,
    vertical_sign,
    vf_bracket,
)
from eqbundle.errors import ChartMismatch, DimensionError
from eqbundle.fixtures import random_lvf, random_poly, random_vector_field
from eqbundle.lie import LieValuedFunction, abelian, sl2
from eqbundle.poly import Poly

C2 = Chart(("x", "y"))
X, Y = C2.coords()
DX, DY = VectorField.coordinate(C2, 0), VectorField.coordinate(C2, 1)


def test_vector_field_bracket_by_hand():
    assert vf_bracket(VectorField(C2, [C2.zero(), X]), DX) == -DY
    rot = VectorField(C2, [-Y, X])
    radial = VectorField(C2, [X, Y])
    assert vf_bracket(rot, radial).is_zero()
    assert vf_bracket(DX, VectorField(C2, [X, C2.zero()])) == DX


def test_vector_field_render():
    assert DX.render() == "d_x"
    assert VectorField(C2, [C2.zero(), X]).render() == "(x)*d_y"


def test_chart_checks():
    with pytest.raises(ChartMismatch):
        vf_bracket(DX, VectorField.coordinate(Chart(("u", "v")), 0))
    with pytest.raises(DimensionError):
        VectorField(C2, [X])
    with pytest.raises(ValueError):
        Chart(("x", "x"))


def test_invariant_bracket_by_hand():
    s = sl2()
    h = LieValuedFunction.basis(s, 2, 0)
    e = LieValuedFunction.basis(s, 2, 1)
    zero = VectorField.zero(C2)
    a = InvariantField(DX, e * Y)
    b = InvariantField(zero, h)
    with vertical_sign(1):
        br = invariant_bracket(a, b)
        # d_x(h) - 0 + [y e, h] = -2 y e
        assert br.base.is_zero()
        assert br.vert == e * (-2 * Y)
    with vertical_sign(-1):
        assert invariant_bracket(a, b).vert == e * (2 * Y)


def test_vertical_sign_context_restores():
    assert current_vertical_sign() == -1
    with vertical_sign(1):
        assert current_vertical_sign() == 1
    assert current_vertical_sign() == -1
    with pytest.raises(ValueError):
        with vertical_sign(2):
            pass


def test_exterior_derivative_by_hand():
    alg = abelian(1, "C", ["e"])
    form = LieValuedOneForm(C2, alg, [LieValuedFunction(alg, [Y]), LieValuedFunction(alg, [X * X])])
    d = exterior_derivative(form)
    assert d.component(0, 1) == LieValuedFunction(alg, [2 * X - 1])
    assert d.component(1, 0) == -d.component(0, 1)
    assert d.component(0, 0).is_zero()


def test_contract_by_hand():
    alg = abelian(1, "C", ["e"])
    omega = LieValuedTwoForm(C2, alg, {(0, 1): LieValuedFunction(alg, [C2.const(-1)])})
    # i_{d_x}(-dx^dy) = -dy, i_{d_y}(-dx^dy) = dx
    assert contract(omega, DX).components[1] == LieValuedFunction(alg, [C2.const(-1)])
    assert contract(omega, DY).components[0] == LieValuedFunction(alg, [C2.const(1)])


def test_pullback_by_hand():
    alg = abelian(1, "C", ["e"])
    t = Poly.var(2, 0)
    # x dy pulled back along (x + 3, y) is (x + 3) dy
    form = LieValuedOneForm(C2, alg, [LieValuedFunction.zero(alg, 2), LieValuedFunction(alg, [X])])
    pulled = pullback_oneform(form, [X + 3, Y])
    assert pulled.components[1] == LieValuedFunction(alg, [t + 3])
    assert pulled.components[0].is_zero()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_bracket_antisymmetry_and_leibniz(seed):
    rng = random.Random(seed)
    v, w = random_vector_field(rng, C2), random_vector_field(rng, C2)
    f = random_poly(rng, 2)
    assert vf_bracket(v, w) == -vf_bracket(w, v)
    # [V, f W] = V(f) W + f [V, W]
    assert vf_bracket(v, w * f) == w * v.apply(f) + vf_bracket(v, w) * f


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([1, -1]))
def test_invariant_bracket_antisymmetry(seed, sign):
    rng = random.Random(seed)
    s = sl2()
    a = InvariantField(random_vector_field(rng, C2), random_lvf(rng, s, 2))
    b = InvariantField(random_vector_field(rng, C2), random_lvf(rng, s, 2))
    with vertical_sign(sign):
        assert invariant_bracket(a, b) == InvariantField(-invariant_bracket(b, a).base,
                                                         -invariant_bracket(b, a).vert)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_differential_of_constant_vanishes_and_d_is_linear(seed):
    rng = random.Random(seed)
    s = sl2()
    f, g = random_lvf(rng, s, 2), random_lvf(rng, s, 2)
    assert differential(C2, f + g) == differential(C2, f) + differential(C2, g)
    assert differential(C2, LieValuedFunction.constant(s, 2, [1, 2, 3])).is_zero()
