"""Exact linear solving over the Gaussian rationals.

Elimination is fraction-free (Bareiss): every row is first scaled to Gaussian
integer entries and the one-step elimination divides only by the previous
pivot, which is always exact. Pivots are chosen by lowest column, then lowest
row index, so results are reproducible.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from .errors import DimensionError
from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = ["LinearSystem", "Solution", "solve_linear"]


@dataclass(frozen=True)
class LinearSystem:
    """Rows ``(coefficients, rhs)`` meaning ``sum_j coefficients[j] * u_j = rhs``."""

    num_unknowns: int
    rows: tuple[tuple[tuple[Scalar, ...], Scalar], ...] = ()

    def __post_init__(self):
        rows = []
        for k, (vec, rhs) in enumerate(self.rows):
            if len(vec) != self.num_unknowns:
                raise DimensionError(
                    f"row {k} has {len(vec)} coefficients, expected {self.num_unknowns}")
            rows.append((tuple(as_scalar(c) for c in vec), as_scalar(rhs)))
        object.__setattr__(self, "rows", tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence], rhs: Sequence) -> LinearSystem:
        if len(matrix) != len(rhs):
            raise DimensionError("matrix and right-hand side have different row counts")
        n = len(matrix[0]) if matrix else 0
        return cls(n, tuple((tuple(row), b) for row, b in zip(matrix, rhs)))

    def residuals(self, u: Sequence[Scalar]) -> list[Scalar]:
        return [sum((c * x for c, x in zip(vec, u)), ZERO) - b for vec, b in self.rows]


@dataclass(frozen=True)
class Solution:
    particular: tuple[Scalar, ...]
    kernel: tuple[tuple[Scalar, ...], ...] = field(default=())

    @property
    def rank_deficiency(self) -> int:
        return len(self.kernel)


def _integer_row(vec: Sequence[Scalar]) -> list[Scalar]:
    dens = [c.re_den for c in vec] + [c.im_den for c in vec]
    scale = math.lcm(*dens) if dens else 1
    return [c * scale for c in vec]


def solve_linear(system: LinearSystem) -> Solution | None:
    """Solve exactly; ``None`` means the system is inconsistent.

    Returns one particular solution (free unknowns set to zero) and a basis of
    the homogeneous kernel, one vector per free unknown.
    """
    n = system.num_unknowns
    # augmented rows scaled to Gaussian-integer entries
    m = [_integer_row(list(vec) + [rhs]) for vec, rhs in system.rows]
    nrows = len(m)
    pivots: list[int] = []
    prev = ONE
    r = 0
    for col in range(n):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if not m[i][col].is_zero()), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        piv = m[r][col]
        for i in range(r + 1, nrows):
            lead = m[i][col]
            row_i, row_r = m[i], m[r]
            for j in range(col + 1, n + 1):
                row_i[j] = (piv * row_i[j] - lead * row_r[j]) / prev
            row_i[col] = ZERO
        # rows above r are untouched by Bareiss; they keep their own scaling
        prev = piv
        pivots.append(col)
        r += 1

    for i in range(r, nrows):
        if not m[i][n].is_zero():
            return None

    # back substitution on the echelon form
    x = [ZERO] * n
    for k in range(len(pivots) - 1, -1, -1):
        col = pivots[k]
        row = m[k]
        acc = row[n]
        for j in range(col + 1, n):
            if not row[j].is_zero() and not x[j].is_zero():
                acc = acc - row[j] * x[j]
        x[col] = acc / row[col]

    pivot_set = set(pivots)
    kernel = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [ZERO] * n
        v[free] = ONE
        for k in range(len(pivots) - 1, -1, -1):
            col = pivots[k]
            row = m[k]
            acc = ZERO
            for j in range(col + 1, n):
                if not row[j].is_zero() and not v[j].is_zero():
                    acc = acc - row[j] * v[j]
            v[col] = acc / row[col]
        kernel.append(tuple(v))
    return Solution(tuple(x), tuple(kernel))
