import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from eqbundle.errors import DimensionError
from eqbundle.linalg import LinearSystem, solve_linear
from eqbundle.scalars import ZERO, Scalar
from strategies import scalars

# few distinct values so that rank deficiency actually shows up
entries = st.sampled_from([Scalar(0), Scalar(0), Scalar(1), Scalar(-2), Scalar(0, 1), Scalar(3, 1)])


def _sym(s: Scalar):
    return sympy.Rational(s.re_num, s.re_den) + sympy.I * sympy.Rational(s.im_num, s.im_den)


def test_unique_solution():
    sol = solve_linear(LinearSystem.from_matrix([[2, 1], [1, 3]], [3, 5]))
    assert sol.particular == (Scalar(4, 0) / 5, Scalar(7, 0) / 5)
    assert sol.kernel == ()


def test_inconsistent_system():
    assert solve_linear(LinearSystem.from_matrix([[1, 1], [2, 2]], [1, 3])) is None


def test_underdetermined_kernel():
    sol = solve_linear(LinearSystem.from_matrix([[1, 1, 1]], [6]))
    system = LinearSystem.from_matrix([[1, 1, 1]], [6])
    assert all(r.is_zero() for r in system.residuals(sol.particular))
    assert len(sol.kernel) == 2
    for k in sol.kernel:
        assert sum(k, ZERO) == 0


def test_gaussian_coefficients():
    # (1+i) u = 2 has u = 1 - i
    sol = solve_linear(LinearSystem.from_matrix([[Scalar(1, 1)]], [2]))
    assert sol.particular == (Scalar(1, -1),)


def test_row_length_checked():
    with pytest.raises(DimensionError):
        LinearSystem(2, (((1,), 0),))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_against_sympy_rank(rows, cols, data):
    matrix = [[data.draw(entries) for _ in range(cols)] for _ in range(rows)]
    rhs = [data.draw(scalars) for _ in range(rows)]
    system = LinearSystem.from_matrix(matrix, rhs)
    sol = solve_linear(system)
    a = sympy.Matrix([[_sym(c) for c in row] for row in matrix])
    ab = a.row_join(sympy.Matrix([_sym(c) for c in rhs]))
    rank = a.rank()
    if ab.rank() > rank:
        assert sol is None
        return
    assert sol is not None
    assert all(r.is_zero() for r in system.residuals(sol.particular))
    assert len(sol.kernel) == cols - rank
    homogeneous = LinearSystem.from_matrix(matrix, [0] * rows)
    for k in sol.kernel:
        assert all(r.is_zero() for r in homogeneous.residuals(k))
    if sol.kernel:
        kernel = sympy.Matrix([[_sym(c) for c in k] for k in sol.kernel])
        assert kernel.rank() == len(sol.kernel)
