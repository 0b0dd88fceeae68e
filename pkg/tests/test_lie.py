import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqbundle.lie import (
    LieAlgebra,
    LieValuedFunction,
    abelian,
    affine_line,
    check_jacobi,
    gl,
    gl_identity,
    heisenberg,
    jacobi_violation,
    lie_bracket,
    sl2,
    so3,
)
from eqbundle.poly import Poly
from eqbundle.scalars import ZERO, Scalar
from strategies import polys, scalars

SHIPPED = [abelian(1), abelian(3), sl2(), so3(), heisenberg(), affine_line(), gl(1), gl(2), gl(3)]


def _matrix(alg, coords, r):
    return [[coords[i * r + j] for j in range(r)] for i in range(r)]


def _commutator(a, b):
    r = len(a)
    prod = lambda p, q: [[sum((p[i][k] * q[k][j] for k in range(r)), ZERO) for j in range(r)]
                         for i in range(r)]
    ab, ba = prod(a, b), prod(b, a)
    return [[ab[i][j] - ba[i][j] for j in range(r)] for i in range(r)]


@pytest.mark.parametrize("alg", SHIPPED, ids=lambda a: a.name)
def test_shipped_algebras_are_lie(alg):
    assert check_jacobi(alg)
    for i in range(alg.dim):
        assert alg.bracket_basis(i, i) == {}
        for j in range(alg.dim):
            for k in range(alg.dim):
                assert alg.c(i, j, k) == -alg.c(j, i, k)


def test_sl2_table():
    s = sl2()
    h, e, f = (tuple(Scalar(int(i == k)) for i in range(3)) for k in range(3))
    assert s.bracket(h, e) == tuple(2 * c for c in e)
    assert s.bracket(h, f) == tuple(-2 * c for c in f)
    assert s.bracket(e, f) == h


@settings(max_examples=40)
@given(st.integers(2, 3), st.data())
def test_gl_matches_matrix_commutator(r, data):
    alg = gl(r)
    a = [data.draw(scalars) for _ in range(r * r)]
    b = [data.draw(scalars) for _ in range(r * r)]
    got = alg.bracket(a, b)
    expected = _commutator(_matrix(alg, a, r), _matrix(alg, b, r))
    assert [got[i * r + j] for i in range(r) for j in range(r)] == [c for row in expected for c in row]


def test_gl_identity_is_central():
    alg = gl(2)
    ident = gl_identity(2)
    for k in range(alg.dim):
        unit = tuple(Scalar(int(i == k)) for i in range(alg.dim))
        assert all(c.is_zero() for c in alg.bracket(ident, unit))


def test_antisymmetry_conflict_rejected():
    with pytest.raises(ValueError):
        LieAlgebra("bad", ["a", "b"], {(0, 1): {1: 1}, (1, 0): {1: 1}})


def test_jacobi_violation_detected():
    # [a,b] = a, [b,c] = a, [a,c] = b: the cyclic sum is [[a,b],c] = b
    bad = LieAlgebra("bad", ["a", "b", "c"], {(0, 1): {0: 1}, (1, 2): {0: 1}, (0, 2): {1: 1}})
    assert not check_jacobi(bad)
    assert jacobi_violation(bad) == (0, 1, 2)


@settings(max_examples=40)
@given(polys(2, 1), polys(2, 1), polys(2, 1), polys(2, 1), polys(2, 1), polys(2, 1))
def test_pointwise_bracket_of_functions(p1, p2, p3, q1, q2, q3):
    s = sl2()
    a = LieValuedFunction(s, [p1, p2, p3])
    b = LieValuedFunction(s, [q1, q2, q3])
    ab = lie_bracket(a, b)
    assert ab == -lie_bracket(b, a)
    pt = (Scalar(2), Scalar(-1, 1))
    assert ab.eval(pt).coords == s.bracket(a.eval(pt).coords, b.eval(pt).coords)


def test_lie_valued_function_render():
    s = sl2()
    x = Poly.var(2, 0)
    f = LieValuedFunction.basis(s, 2, 1, x) + LieValuedFunction.basis(s, 2, 0)
    assert f.render(["x", "y"]) == "(1)*h + (x)*e"
