import itertools
import random

import pytest

from eqbundle.calculus import Chart, VectorField
from eqbundle.errors import InvalidSampleError
from eqbundle.fixtures import c2, foliation_examples, random_lvf, random_poly
from eqbundle.foliations import (
    Foliation,
    PartialConnection,
    check_involutive,
    default_sample_points,
    frame_coefficients,
    partial_curvature_flat,
    strongly_adapted_to_D,
)
from eqbundle.lie import LieValuedFunction, abelian, sl2
from eqbundle.scalars import Scalar

C2 = c2()
X, Y = C2.coords()
DX, DY = VectorField.coordinate(C2, 0), VectorField.coordinate(C2, 1)
LINE = abelian(1, "C", ["e"])
C3 = Chart(("x", "y", "z"))
X3 = C3.coord(0)


def _vf(chart, *comps):
    return VectorField(chart, [c if not isinstance(c, int) else chart.const(c) for c in comps])


def test_frame_coefficients():
    frame = [_vf(C2, 1, 1), DY]
    c = frame_coefficients(frame, (Scalar(0), Scalar(0)), (Scalar(2), Scalar(5)))
    assert c == (Scalar(2), Scalar(3))
    assert frame_coefficients([DX], (0, 0), (Scalar(0), Scalar(1))) is None
    with pytest.raises(InvalidSampleError):
        frame_coefficients([_vf(C2, X, 0)], (Scalar(0), Scalar(4)), (Scalar(0), Scalar(0)))


def test_involutive_examples():
    assert check_involutive(Foliation([DX], [(1, 2)]))
    assert check_involutive(Foliation([DX, DY], [(1, 2), (0, 0)]))
    contact = Foliation([_vf(C3, 1, 0, 0), _vf(C3, 0, 1, X3)], [(1, 2, 3), (-2, 0, 5)])
    v = check_involutive(contact)
    assert not v
    assert v.location["pair"] == (0, 1)
    assert v.defect == _vf(C3, 0, 0, 1)


def test_rank_deficient_sample_rejected():
    with pytest.raises(InvalidSampleError):
        Foliation([_vf(C2, X, Y)], [(0, 0)])


def test_default_samples_are_seeded_and_generic():
    frame = [_vf(C2, X, Y)]
    a = default_sample_points(frame, 7)
    assert a == default_sample_points(frame, 7)
    assert a != default_sample_points(frame, 8)
    assert len(a) == 8 and (Scalar(0), Scalar(0)) not in a


def test_partial_flatness_examples():
    fol = Foliation([DX, DY], [(1, 2), (3, -1)])
    zero = LieValuedFunction.zero(LINE, 2)
    assert partial_curvature_flat(PartialConnection(fol, (zero, zero)))
    twisted = PartialConnection(fol, (zero, LieValuedFunction(LINE, [X])))
    v = partial_curvature_flat(twisted)
    assert not v and v.clause == "flat"
    assert v.defect == LieValuedFunction(LINE, [C2.const(1)])
    assert partial_curvature_flat(PartialConnection(Foliation([DX], [(0, 0)]), (LieValuedFunction(LINE, [Y]),)))


def test_partial_flatness_with_nonconstant_frame():
    # frame {d_x, x d_x + d_y}: [s1, s2] = s1, so flatness needs the delta term
    s1, s2 = DX, _vf(C2, X, 1)
    fol = Foliation([s1, s2], [(1, 2), (3, -1), (0, 0)])
    f = X * Y + Y
    # D = d restricted: delta_i = s_i(f) makes D flat
    deltas = (LieValuedFunction(LINE, [s1.apply(f)]), LieValuedFunction(LINE, [s2.apply(f)]))
    assert partial_curvature_flat(PartialConnection(fol, deltas))


def test_strongly_adapted_to_d_fixtures():
    expected = {"fol_flat_ydy": (True, None), "fol_twisted_xdy": (False, "contraction"),
                "fol_exact_diagonal": (True, None)}
    for fx in foliation_examples():
        v = strongly_adapted_to_D(fx.eta, fx.partial)
        assert (v.holds, v.clause) == expected[fx.name]
    twisted = next(fx for fx in foliation_examples() if fx.name == "fol_twisted_xdy")
    v = strongly_adapted_to_D(twisted.eta, twisted.partial)
    assert v.clauses == {"restriction": True, "contraction": False}


def test_restriction_clause_failure():
    fx = foliation_examples()[0]
    wrong = PartialConnection(fx.partial.foliation, (LieValuedFunction(LINE, [C2.const(1)]),))
    v = strongly_adapted_to_D(fx.eta, wrong)
    assert v.clause == "restriction" and v.location == {"frame_index": 0}


def test_flatness_invariant_under_reordering():
    rng = random.Random(3)
    s = sl2()
    for _ in range(10):
        frame = [DX, DY]
        fol = Foliation(frame, [(1, 2), (-1, 3)])
        deltas = tuple(random_lvf(rng, s, 2, max_degree=1) for _ in frame)
        d = PartialConnection(fol, deltas)
        verdicts = {partial_curvature_flat(d.reordered(order)).holds
                    for order in itertools.permutations(range(2))}
        assert len(verdicts) == 1


def test_reordering_three_fields():
    f = random_poly(random.Random(1), 3, 2)
    frame = [_vf(C3, 1, 0, 0), _vf(C3, 0, 1, 0), _vf(C3, 0, 0, 1)]
    fol = Foliation(frame, [(1, 2, 3), (0, -1, 2)])
    flat = tuple(LieValuedFunction(LINE, [f.diff(i)]) for i in range(3))
    bumped = flat[:2] + (flat[2] + LieValuedFunction(LINE, [X3]),)
    for deltas, expected in ((flat, True), (bumped, False)):
        d = PartialConnection(fol, deltas)
        for order in itertools.permutations(range(3)):
            assert partial_curvature_flat(d.reordered(order)).holds is expected
