import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqbundle.calculus import Chart, InvariantField, LieValuedOneForm, VectorField, vertical_sign
from eqbundle.connections import (
    Connection,
    GAction,
    GConnection,
    PhiZero,
    contraction_criterion,
    curvature,
    curvature_closed_form,
    g_curvature,
    gconnection_from_phi0,
    is_adapted,
    is_strongly_adapted,
    phi0_from_gconnection,
    phi_tilde,
    pi_tensor,
    solve_phi0,
    theorem1_check,
    tilde_eta,
)
from eqbundle.errors import ChartMismatch, ConventionError
from eqbundle.fixtures import c2, c2_translation, center_glr, random_connection, translation_action
from eqbundle.lie import LieValuedFunction, abelian, affine_line, heisenberg, sl2

C2 = c2()
X, Y = C2.coords()
LINE = abelian(1, "C", ["e"])


def _line_form(ax, ay):
    return Connection(LieValuedOneForm(C2, LINE, [LieValuedFunction(LINE, [ax]), LieValuedFunction(LINE, [ay])]))


def test_curvature_of_x_dy():
    k = curvature(_line_form(C2.zero(), X))
    assert k.component(0, 1) == LieValuedFunction(LINE, [C2.const(-1)])
    assert k.render() == "[(-1)*e] dx^dy"


@pytest.mark.parametrize("sign", [1, -1])
def test_constant_sl2_curvature_is_bracket_term(sign):
    # A = h dx + e dy has dA = 0, so K_xy = sign * [h, e] = 2 * sign * e
    s = sl2()
    eta = Connection(LieValuedOneForm(C2, s, [LieValuedFunction.basis(s, 2, 0),
                                               LieValuedFunction.basis(s, 2, 1)]))
    with vertical_sign(sign):
        k = curvature(eta)
    assert k.component(0, 1) == LieValuedFunction.basis(s, 2, 1) * (2 * sign)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([1, -1]))
def test_curvature_routes_agree(seed, sign):
    rng = random.Random(seed)
    chart = Chart.standard(rng.choice([2, 3]))
    alg = rng.choice([sl2(), heisenberg(), abelian(2)])
    eta = random_connection(rng, chart, alg)
    with vertical_sign(sign):
        assert curvature(eta) == curvature_closed_form(eta)


def test_flat_gauge_is_flat():
    # A = d f for abelian h
    f = X * X * Y + 3 * Y
    assert curvature(_line_form(f.diff(0), f.diff(1))).is_zero()


def test_action_sign_detection():
    trans = translation_action(C2, [0, 1])
    assert trans.epsilon == 1
    x_dx = VectorField(C2, [X, C2.zero()])
    dx = VectorField.coordinate(C2, 0)
    # [x d_x, d_x] = -d_x while [a, b] = b in aff(1)
    assert GAction(affine_line(), [x_dx, dx]).epsilon == -1
    assert GAction(affine_line(), [-x_dx, dx]).epsilon == 1
    with pytest.raises(ConventionError):
        GAction(affine_line(), [x_dx, VectorField.coordinate(C2, 1)])
    with pytest.raises(ConventionError):
        GAction(affine_line(), [x_dx, dx], epsilon=1)


def test_gconnection_base_must_match_generator():
    act = translation_action(C2, [0])
    wrong = InvariantField(VectorField.coordinate(C2, 1), LieValuedFunction.zero(LINE, 2))
    with pytest.raises(ValueError):
        GConnection(act, [wrong])


def test_g_curvature():
    ex = center_glr()
    assert g_curvature(ex.h).is_zero()
    act = translation_action(C2, [0, 1])
    # psi = (y e, 0): [h1, h2] has vertical part -d_y(y e) = -e
    h = GConnection.from_verts(act, [LieValuedFunction(LINE, [Y]), LieValuedFunction.zero(LINE, 2)])
    assert g_curvature(h).value(0, 1) == LieValuedFunction(LINE, [C2.const(-1)])
    assert g_curvature(h).value(1, 0) == LieValuedFunction(LINE, [C2.const(1)])


def test_g_curvature_anti_homomorphic_action():
    x_dx = VectorField(C2, [X, C2.zero()])
    dx = VectorField.coordinate(C2, 0)
    act = GAction(affine_line(), [x_dx, dx])
    h = GConnection.from_verts(act, [LieValuedFunction.zero(LINE, 2)] * 2)
    assert g_curvature(h).is_zero()


def test_center_example():
    ex = center_glr()
    assert is_adapted(ex.eta, ex.h)
    v = is_strongly_adapted(ex.eta, ex.h)
    assert not v and v.clause == "image"
    assert v.clauses == {"adapted": True, "image": False}


def test_translation_example():
    ex = c2_translation()
    adapted = is_adapted(ex.eta, ex.h)
    assert not adapted
    assert adapted.location == {"generator": 0, "coordinate": 1}
    assert adapted.defect == LieValuedFunction(LINE, [C2.const(-1)])
    strong = is_strongly_adapted(ex.eta, ex.h)
    assert strong.clauses == {"adapted": False, "image": True}
    assert strong.clause == "adapted"


def test_tilde_eta_is_lift_of_generators():
    ex = c2_translation()
    ht = tilde_eta(ex.eta, ex.action)
    assert ht.lifts[0] == ex.eta.lift(ex.action.generators[0])
    assert is_strongly_adapted(ex.eta, ht).clauses["image"]
    assert not contraction_criterion(ex.eta, ex.action)


def test_phi_tilde_and_pi_by_hand():
    ex = c2_translation()
    e = lambda p: LieValuedFunction(LINE, [p])
    pi = pi_tensor(ex.eta, ex.action)
    assert pi[(0, 0)].is_zero() and pi[(0, 1)] == e(C2.const(-1))
    pt = phi_tilde(PhiZero((e(-Y),)), ex.eta)
    # phi~(v, i) = -d_i phi0 for abelian h
    assert pt[(0, 0)].is_zero() and pt[(0, 1)] == e(C2.const(1))


def test_phi0_on_translation_example():
    ex = c2_translation()
    sol = solve_phi0(ex.eta, ex.action, 1)
    assert sol is not None
    assert len(sol.kernel) == 1
    assert sol.kernel[0][0] == LieValuedFunction(LINE, [C2.const(1)])
    diff = sol.phi0[0] - LieValuedFunction(LINE, [-Y])
    assert diff.components[0].is_constant()
    res = theorem1_check(sol.phi0, ex.eta, ex.action)
    assert res
    assert is_adapted(ex.eta, res.g_connection)
    assert res.g_connection.lifts[0].base == VectorField.coordinate(C2, 0)
    assert solve_phi0(ex.eta, ex.action, 0) is None
    bad = theorem1_check(PhiZero((LieValuedFunction(LINE, [X]),)), ex.eta, ex.action)
    assert not bad and bad.location == {"generator": 0, "coordinate": 0}


def test_phi0_round_trip_through_gconnection():
    ex = c2_translation()
    phi0 = PhiZero((LieValuedFunction(LINE, [-Y + 5]),))
    h = gconnection_from_phi0(phi0, ex.eta, ex.action)
    assert phi0_from_gconnection(ex.eta, h) == phi0


@pytest.mark.parametrize("sign", [1, -1])
def test_solve_phi0_nonabelian(sign):
    # A independent of x with A_x = phi0 planted; phi0 solves the system
    s = sl2()
    planted = LieValuedFunction.basis(s, 2, 1, Y) + LieValuedFunction.basis(s, 2, 0)
    eta = Connection(LieValuedOneForm(C2, s, [planted, LieValuedFunction.basis(s, 2, 2, Y * Y)]))
    act = translation_action(C2, [0])
    with vertical_sign(sign):
        assert theorem1_check(PhiZero((planted,)), eta, act)
        sol = solve_phi0(eta, act, 2)
        assert sol is not None
        assert theorem1_check(sol.phi0, eta, act)
        for k in sol.kernel:
            assert theorem1_check(sol.phi0 + k, eta, act)


def test_chart_mismatch():
    ex = c2_translation()
    other = translation_action(Chart(("u", "v")), [0])
    with pytest.raises(ChartMismatch):
        contraction_criterion(ex.eta, other)
