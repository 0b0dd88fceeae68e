import math

import numpy as np
import pytest

from eqbundle.calculus import Chart, LieValuedOneForm, VectorField
from eqbundle.connections import Connection
from eqbundle.errors import DegenerateFrameError, DivergenceError, InvalidFlowError, UnsupportedError
from eqbundle.fixtures import c2, line_algebra
from eqbundle.flows import (
    NumericFlowProblem,
    bracket_condition,
    check_prop1_polyflow,
    compile_poly,
    integrate_flow,
    lemma1_consistent,
    prop1_agrees_with_adapted,
    transport_frame,
)
from eqbundle.lie import LieValuedFunction, sl2
from eqbundle.poly import Poly
from eqbundle.scalars import Scalar

C2 = c2()
X, Y = C2.coords()
DX, DY = VectorField.coordinate(C2, 0), VectorField.coordinate(C2, 1)
LINE = line_algebra()
T = Poly.var(3, 2)
X3, Y3 = Poly.var(3, 0), Poly.var(3, 1)


def _vf(*comps):
    return VectorField(C2, [c if isinstance(c, Poly) else C2.const(c) for c in comps])


def _line_eta(ax, ay):
    return Connection(LieValuedOneForm(C2, LINE, [LieValuedFunction(LINE, [ax]),
                                                  LieValuedFunction(LINE, [ay])]))


def test_compile_poly():
    f = compile_poly(X * X * Y - 3)
    assert f(np.array([2.0, 5.0])) == 17.0
    with pytest.raises(UnsupportedError):
        compile_poly(X * Scalar(0, 1))


def test_integrate_flow_examples():
    assert np.allclose(integrate_flow(DX, [0, 0], 1.0, 10)[-1], [1, 0], atol=1e-12)
    assert np.allclose(integrate_flow(_vf(0, X), [1, 0], 1.0, 10)[-1], [1, 1], atol=1e-12)
    end = integrate_flow(_vf(X, 0), [1, 0], 1.0, 100)[-1]
    assert abs(end[0] - math.e) < 1e-8 and end[1] == 0
    assert integrate_flow(DX, [0, 0], 1.0, 7).shape == (8, 2)


def test_integration_is_deterministic():
    rot = _vf(-Y, X)
    a = integrate_flow(rot, [1, 0.5], 2.0, 300)
    b = integrate_flow(rot, [1, 0.5], 2.0, 300)
    assert np.array_equal(a, b)


def test_rk4_fourth_order():
    errors = [abs(integrate_flow(_vf(X, 0), [1, 0], 1.0, n)[-1][0] - math.e) for n in (10, 20, 40)]
    for coarse, fine in zip(errors, errors[1:]):
        assert 8 <= coarse / fine <= 32


def test_divergence_reports_last_valid_time():
    with pytest.raises(DivergenceError) as info:
        integrate_flow(_vf(X * X * X, 0), [1, 0], 3.0, 300)
    assert 0 < info.value.last_valid_time < 3.0


def test_transport_examples():
    rep = transport_frame(DX, [DY], [0, 0], 1.0, 1000)
    assert rep.max_deviation <= 1e-10
    rep = transport_frame(_vf(0, X), [DX], [1, 0], 1.0, 1000)
    for (_, t), dev in rep.deviations.items():
        assert dev == pytest.approx(t / math.sqrt(1 + t * t), abs=1e-9)
    assert rep.deviations[(0, 1.0)] >= 0.5
    assert transport_frame(_vf(0, X), [DY], [1, 0], 1.0, 1000).max_deviation <= 1e-10


def test_transport_checkpoints():
    rep = transport_frame(DX, [DY], [0, 0], 1.0, 100, checkpoints=4)
    assert sorted(t for _, t in rep.deviations) == [0.25, 0.5, 0.75, 1.0]


def test_degenerate_frame_along_trajectory():
    # x d_x vanishes where the trajectory crosses x = 0
    with pytest.raises(DegenerateFrameError):
        transport_frame(DX, [_vf(X, 0)], [-1, 0], 1.0, 100, checkpoints=1)


def test_bracket_condition_examples():
    pts = [(Scalar(1), Scalar(2)), (Scalar(-3), Scalar(1))]
    assert bracket_condition(DX, [DY], pts)
    v = bracket_condition(_vf(0, X), [DX], pts)
    assert not v and v.defect == -DY
    assert bracket_condition(_vf(X, Y), [_vf(X, Y)], pts)


def test_problem_validation():
    with pytest.raises(ValueError):
        NumericFlowProblem(DX, [DY], [[0, 0]], t_max=0)
    with pytest.raises(ValueError):
        NumericFlowProblem(DX, [DY], [[0, 0]], steps=0)
    with pytest.raises(ValueError):
        NumericFlowProblem(DX, [DY], [[0, 0]], tolerance=-1)


def test_flow_consistency_on_small_problem():
    out = lemma1_consistent(NumericFlowProblem(_vf(0, X), [DX], [[1, 0]], steps=200))
    assert not out.bracket and not out.preserved and out.consistent


def test_polyflow_examples():
    shift = [X3 + T, Y3]
    zero = LieValuedFunction.zero(LINE, 2)
    assert check_prop1_polyflow(_line_eta(C2.zero(), Y), DX, shift, zero, [1, 2])
    v = check_prop1_polyflow(_line_eta(C2.zero(), X), DX, shift, zero, [1])
    assert not v and v.location == {"t": "1"}
    # Phi_t^* A - A = t dy for A = x dy
    assert v.defect.components[1] == LieValuedFunction(LINE, [C2.const(1)])
    shear = [X3, Y3 + T * X3]  # flow of x d_y
    assert check_prop1_polyflow(_line_eta(C2.zero(), C2.zero()), _vf(0, X), shear, zero, [3])


def test_polyflow_gauge_lift_restores_invariance():
    psi = LieValuedFunction(LINE, [-Y])
    v, a = prop1_agrees_with_adapted(_line_eta(C2.zero(), X), DX, [X3 + T, Y3], psi, [1, Scalar(1) / 3])
    assert v and a


def test_polyflow_errors():
    zero = LieValuedFunction.zero(LINE, 2)
    with pytest.raises(InvalidFlowError):
        check_prop1_polyflow(_line_eta(X, Y), DX, [X3 + 2 * T, Y3], zero, [1])
    with pytest.raises(InvalidFlowError):
        check_prop1_polyflow(_line_eta(X, Y), DX, [X3 + T + 1, Y3], zero, [1])
    s = sl2()
    eta = Connection.trivial(C2, s)
    with pytest.raises(UnsupportedError):
        check_prop1_polyflow(eta, DX, [X3 + T, Y3], LieValuedFunction.zero(s, 2), [1])


def test_real_chart_in_three_dimensions():
    c3 = Chart(("x", "y", "z"))
    x = c3.coord(0)
    xi = VectorField(c3, [c3.zero(), c3.zero(), x])
    rep = transport_frame(xi, [VectorField.coordinate(c3, 0), VectorField.coordinate(c3, 1)],
                          [1, 0, 0], 1.0, 1000)
    assert rep.deviations[(0, 1.0)] == pytest.approx(1 / math.sqrt(2), abs=1e-9)
