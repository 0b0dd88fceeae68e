"""Foliations given by polynomial frames, partial connections, and strong adaptedness to them.

Span membership of a bracket in a frame with polynomial coefficients is decided
pointwise at user-declared sample points, with exact arithmetic. A failure at a
sample is a proof of non-involutivity; success at all samples is evidence, not
proof.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass

from .calculus import Chart, InvariantField, VectorField, contract, invariant_bracket, vf_bracket
from .connections import Connection, curvature
from .errors import AlgebraMismatch, ChartMismatch, DimensionError, InvalidSampleError
from .lie import LieAlgebra, LieValuedFunction
from .linalg import LinearSystem, Solution, solve_linear
from .scalars import ZERO, Scalar, as_scalar
from .verdict import Verdict

__all__ = [
    "Foliation",
    "PartialConnection",
    "frame_coefficients",
    "check_involutive",
    "partial_curvature_flat",
    "strongly_adapted_to_D",
    "default_sample_points",
]

Point = tuple[Scalar, ...]


def frame_coefficients(frame: Sequence[VectorField], point: Sequence[Scalar],
                       target: Sequence[Scalar]) -> tuple[Scalar, ...] | None:
    """Solve ``frame(point) @ c = target`` exactly.

    Returns ``None`` when ``target`` is outside the span. Raises
    :class:`InvalidSampleError` when the frame is rank deficient at ``point``.
    """
    columns = [f.eval(point) for f in frame]
    n = len(target)
    matrix = [[col[r] for col in columns] for r in range(n)]
    sol: Solution | None = solve_linear(LinearSystem.from_matrix(matrix, list(target)))
    if sol is None:
        return None
    if sol.kernel:
        raise InvalidSampleError(
            f"frame has rank {len(frame) - len(sol.kernel)} < {len(frame)} at {_fmt(point)}")
    return sol.particular


def _fmt(point: Sequence[Scalar]) -> str:
    return "(" + ", ".join(str(c) for c in point) + ")"


def frame_rank_ok(frame: Sequence[VectorField], point: Sequence[Scalar]) -> bool:
    try:
        frame_coefficients(frame, point, [ZERO] * frame[0].chart.dim)
    except InvalidSampleError:
        return False
    return True


def default_sample_points(frame: Sequence[VectorField], seed: int, count: int = 8,
                          bound: int = 9, max_tries: int = 1000) -> list[Point]:
    """``count`` small random integer points where the frame has full rank.

    Deterministic for a given seed.
    """
    rng = random.Random(seed)
    n = frame[0].chart.dim
    out: list[Point] = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        pt = tuple(as_scalar(rng.randint(-bound, bound)) for _ in range(n))
        if pt not in out and frame_rank_ok(frame, pt):
            out.append(pt)
    if len(out) < count:
        raise InvalidSampleError(f"could not find {count} generic sample points")
    return out


class Foliation:
    """A distribution spanned by ``frame`` and the exact points where it is checked."""

    __slots__ = ("chart", "frame", "sample_points")

    def __init__(self, frame: Sequence[VectorField], sample_points: Sequence[Sequence]):
        frame = tuple(frame)
        if not frame:
            raise DimensionError("a foliation frame needs at least one field")
        chart = frame[0].chart
        for f in frame:
            if f.chart != chart:
                raise ChartMismatch("frame fields live on different charts")
        if len(frame) > chart.dim:
            raise DimensionError(f"{len(frame)} frame fields on a {chart.dim}-dimensional chart")
        points = []
        for p in sample_points:
            if len(p) != chart.dim:
                raise DimensionError(f"sample point {p} has wrong length")
            pt = tuple(as_scalar(c) for c in p)
            if not frame_rank_ok(frame, pt):
                raise InvalidSampleError(f"frame is rank deficient at sample {_fmt(pt)}")
            points.append(pt)
        if not points:
            raise ValueError("at least one sample point is required")
        self.chart: Chart = chart
        self.frame = frame
        self.sample_points: tuple[Point, ...] = tuple(points)

    @property
    def rank(self) -> int:
        return len(self.frame)

    def reordered(self, order: Sequence[int]) -> Foliation:
        return Foliation([self.frame[k] for k in order], self.sample_points)


@dataclass(frozen=True)
class PartialConnection:
    """``D(s_i) = (s_i, delta_i)`` on the frame fields of a foliation."""

    foliation: Foliation
    deltas: tuple[LieValuedFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(self.deltas))
        if len(self.deltas) != self.foliation.rank:
            raise DimensionError(f"{len(self.deltas)} deltas for {self.foliation.rank} frame fields")
        if len({d.algebra for d in self.deltas}) != 1:
            raise AlgebraMismatch("deltas take values in different algebras")
        for d in self.deltas:
            if d.num_vars != self.foliation.chart.dim:
                raise DimensionError("delta num_vars differs from chart dimension")

    @property
    def algebra(self) -> LieAlgebra:
        return self.deltas[0].algebra

    def lift(self, i: int) -> InvariantField:
        return InvariantField(self.foliation.frame[i], self.deltas[i])

    def reordered(self, order: Sequence[int]) -> PartialConnection:
        return PartialConnection(self.foliation.reordered(order), tuple(self.deltas[k] for k in order))


def check_involutive(fol: Foliation) -> Verdict:
    """Is ``[s_i, s_j](x)`` in the span of the frame at every sample ``x``?"""
    frame = fol.frame
    for i in range(fol.rank):
        for j in range(i + 1, fol.rank):
            br = vf_bracket(frame[i], frame[j])
            for pt in fol.sample_points:
                if frame_coefficients(frame, pt, br.eval(pt)) is None:
                    return Verdict(False, clause="involutive",
                                   location={"pair": (i, j), "point": _fmt(pt)}, defect=br)
    return Verdict(True)


def partial_curvature_flat(d: PartialConnection) -> Verdict:
    """Does the curvature of ``D`` vanish at every sample and frame pair?

    At ``x`` the value on ``(s_i, s_j)`` is the vertical part of
    ``[D s_i, D s_j](x)`` minus ``sum_l c_l(x) delta_l(x)``, where ``c(x)``
    expresses ``[s_i, s_j](x)`` in the frame.
    """
    fol = d.foliation
    inv = check_involutive(fol)
    if not inv:
        return Verdict(False, clause="involutive", location=inv.location, defect=inv.defect)
    for i in range(fol.rank):
        for j in range(i + 1, fol.rank):
            br = invariant_bracket(d.lift(i), d.lift(j))
            for pt in fol.sample_points:
                c = frame_coefficients(fol.frame, pt, br.base.eval(pt))
                value = list(br.vert.eval(pt).coords)
                for cl, delta in zip(c, d.deltas):
                    if not cl.is_zero():
                        dv = delta.eval(pt).coords
                        value = [a - cl * b for a, b in zip(value, dv)]
                if any(not v.is_zero() for v in value):
                    defect = LieValuedFunction.constant(d.algebra, fol.chart.dim, value)
                    return Verdict(False, clause="flat",
                                   location={"pair": (i, j), "point": _fmt(pt)}, defect=defect)
    return Verdict(True)


def strongly_adapted_to_D(eta: Connection, d: PartialConnection) -> Verdict:
    """``eta`` restricted to the foliation equals ``D``, and ``i_s K(eta) = 0`` along it.

    Both clauses are exact polynomial identities over the frame fields. ``clause``
    names the first failing one in the order restriction, contraction.
    """
    fol = d.foliation
    if eta.chart != fol.chart:
        raise ChartMismatch("connection and foliation live on different charts")
    if eta.algebra != d.algebra:
        raise AlgebraMismatch("connection and partial connection take values in different algebras")
    restriction = None
    for i, (s, delta) in enumerate(zip(fol.frame, d.deltas)):
        diff = delta + eta.form(s)
        if not diff.is_zero():
            restriction = (i, diff)
            break
    k = curvature(eta)
    contraction = None
    for i, s in enumerate(fol.frame):
        c = contract(k, s)
        if not c.is_zero():
            contraction = (i, c)
            break
    clauses = {"restriction": restriction is None, "contraction": contraction is None}
    if restriction is not None:
        return Verdict(False, clause="restriction", location={"frame_index": restriction[0]},
                       defect=restriction[1], clauses=clauses)
    if contraction is not None:
        return Verdict(False, clause="contraction", location={"frame_index": contraction[0]},
                       defect=contraction[1], clauses=clauses)
    return Verdict(True, clauses=clauses)
