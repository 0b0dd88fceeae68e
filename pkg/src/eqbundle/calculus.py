"""Vector fields, Lie-algebra-valued forms, and invariant fields on a trivialized bundle.

Everything lives on a single coordinate chart with polynomial coefficients.
An H-invariant vector field on ``chart x H`` is stored as a pair ``(Z, psi)``:
the base field ``Z`` and the Lie-algebra-valued vertical part ``psi`` read in
the trivialization.

The sign of the vertical bracket of two such fields depends on whether
vertical fields are generated by left or right translations. It is a single
configuration point, :data:`DEFAULT_VERTICAL_SIGN`, overridable per thread or
task with :func:`vertical_sign`.
"""

from __future__ import annotations

import contextlib
import contextvars
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass

from .errors import AlgebraMismatch, ChartMismatch, DimensionError
from .lie import LieAlgebra, LieValuedFunction, lie_bracket
from .poly import Poly

__all__ = [
    "Chart",
    "VectorField",
    "LieValuedOneForm",
    "LieValuedTwoForm",
    "InvariantField",
    "DEFAULT_VERTICAL_SIGN",
    "vertical_sign",
    "current_vertical_sign",
    "vf_bracket",
    "invariant_bracket",
    "differential",
    "exterior_derivative",
    "contract",
    "pullback_oneform",
]

# right-invariant vertical fields
DEFAULT_VERTICAL_SIGN = -1

_vertical_sign: contextvars.ContextVar[int] = contextvars.ContextVar(
    "vertical_sign", default=DEFAULT_VERTICAL_SIGN)


def current_vertical_sign() -> int:
    return _vertical_sign.get()


@contextlib.contextmanager
def vertical_sign(sign: int) -> Iterator[int]:
    """Temporarily set the vertical bracket sign (``+1`` or ``-1``)."""
    if sign not in (1, -1):
        raise ValueError("vertical bracket sign must be +1 or -1")
    token = _vertical_sign.set(sign)
    try:
        yield sign
    finally:
        _vertical_sign.reset(token)


@dataclass(frozen=True)
class Chart:
    coord_labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.coord_labels)
        object.__setattr__(self, "coord_labels", labels)
        if not labels:
            raise DimensionError("a chart needs at least one coordinate")
        if len(set(labels)) != len(labels):
            raise ValueError(f"coordinate labels {labels} are not distinct")

    @classmethod
    def standard(cls, dim: int) -> Chart:
        names = ["x", "y", "z", "w"]
        labels = names[:dim] if dim <= len(names) else [f"x{i + 1}" for i in range(dim)]
        return cls(tuple(labels))

    @property
    def dim(self) -> int:
        return len(self.coord_labels)

    def coord(self, i: int) -> Poly:
        return Poly.var(self.dim, i)

    def coords(self) -> list[Poly]:
        return [self.coord(i) for i in range(self.dim)]

    def const(self, value) -> Poly:
        return Poly.const(self.dim, value)

    def zero(self) -> Poly:
        return Poly.zero(self.dim)


def _same_chart(a: Chart, b: Chart) -> None:
    if a != b:
        raise ChartMismatch(f"charts {a.coord_labels} and {b.coord_labels} differ")


class VectorField:
    """``V = sum_i V_i d/dz_i`` with polynomial components."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[Poly]):
        comps = tuple(components)
        if len(comps) != chart.dim:
            raise DimensionError(f"{len(comps)} components on a {chart.dim}-dimensional chart")
        for p in comps:
            if p.num_vars != chart.dim:
                raise DimensionError("component num_vars differs from chart dimension")
        self.chart = chart
        self.components = comps

    @classmethod
    def zero(cls, chart: Chart) -> VectorField:
        return cls(chart, [chart.zero()] * chart.dim)

    @classmethod
    def coordinate(cls, chart: Chart, i: int) -> VectorField:
        comps = [chart.zero()] * chart.dim
        comps[i] = chart.const(1)
        return cls(chart, comps)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def __add__(self, other: VectorField) -> VectorField:
        _same_chart(self.chart, other.chart)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: VectorField) -> VectorField:
        _same_chart(self.chart, other.chart)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> VectorField:
        return VectorField(self.chart, [-a for a in self.components])

    def __mul__(self, f) -> VectorField:
        return VectorField(self.chart, [a * f for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self):
        return hash((self.chart, self.components))

    def apply(self, f: Poly) -> Poly:
        """Directional derivative ``V(f)``."""
        out = self.chart.zero()
        for i, vi in enumerate(self.components):
            if not vi.is_zero():
                out = out + vi * f.diff(i)
        return out

    def apply_lie(self, f: LieValuedFunction) -> LieValuedFunction:
        return LieValuedFunction(f.algebra, [self.apply(p) for p in f.components])

    def eval(self, point: Sequence) -> tuple:
        return tuple(p.eval(point) for p in self.components)

    def render(self) -> str:
        parts = []
        for p, lab in zip(self.components, self.chart.coord_labels):
            if not p.is_zero():
                coeff = p.render(self.chart.coord_labels)
                parts.append(f"d_{lab}" if coeff == "1" else f"({coeff})*d_{lab}")
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"VectorField({self.render()!r})"


class LieValuedOneForm:
    """``omega = sum_i omega_i dz_i`` with Lie-algebra-valued coefficients."""

    __slots__ = ("chart", "algebra", "components")

    def __init__(self, chart: Chart, algebra: LieAlgebra, components: Sequence[LieValuedFunction]):
        comps = tuple(components)
        if len(comps) != chart.dim:
            raise DimensionError(f"{len(comps)} components on a {chart.dim}-dimensional chart")
        for c in comps:
            if c.algebra != algebra:
                raise AlgebraMismatch(f"component in {c.algebra.name!r}, form in {algebra.name!r}")
            if c.num_vars != chart.dim:
                raise DimensionError("component num_vars differs from chart dimension")
        self.chart = chart
        self.algebra = algebra
        self.components = comps

    @classmethod
    def zero(cls, chart: Chart, algebra: LieAlgebra) -> LieValuedOneForm:
        return cls(chart, algebra, [LieValuedFunction.zero(algebra, chart.dim)] * chart.dim)

    def __call__(self, field: VectorField) -> LieValuedFunction:
        """Evaluate on a vector field: ``omega(W) = sum_j W_j omega_j``."""
        _same_chart(self.chart, field.chart)
        out = LieValuedFunction.zero(self.algebra, self.chart.dim)
        for wj, oj in zip(field.components, self.components):
            if not wj.is_zero():
                out = out + oj * wj
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: LieValuedOneForm) -> LieValuedOneForm:
        _same_chart(self.chart, other.chart)
        return LieValuedOneForm(self.chart, self.algebra,
                                [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: LieValuedOneForm) -> LieValuedOneForm:
        _same_chart(self.chart, other.chart)
        return LieValuedOneForm(self.chart, self.algebra,
                                [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> LieValuedOneForm:
        return LieValuedOneForm(self.chart, self.algebra, [-a for a in self.components])

    def __eq__(self, other):
        if not isinstance(other, LieValuedOneForm):
            return NotImplemented
        return (self.chart == other.chart and self.algebra == other.algebra
                and self.components == other.components)

    def __hash__(self):
        return hash((self.chart, self.components))

    def render(self) -> str:
        parts = []
        for c, lab in zip(self.components, self.chart.coord_labels):
            if not c.is_zero():
                parts.append(f"[{c.render(self.chart.coord_labels)}] d{lab}")
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"LieValuedOneForm({self.render()!r})"


class LieValuedTwoForm:
    """``Omega = sum_{i<j} Omega_ij dz_i ^ dz_j``; ``component(j, i) = -component(i, j)``."""

    __slots__ = ("chart", "algebra", "_comps")

    def __init__(self, chart: Chart, algebra: LieAlgebra,
                 components: Mapping[tuple[int, int], LieValuedFunction]):
        n = chart.dim
        comps: dict[tuple[int, int], LieValuedFunction] = {}
        for (i, j), c in components.items():
            if not (0 <= i < j < n):
                raise DimensionError(f"two-form index ({i}, {j}) is not strictly upper triangular")
            if c.algebra != algebra:
                raise AlgebraMismatch(f"component in {c.algebra.name!r}, form in {algebra.name!r}")
            comps[(i, j)] = c
        zero = LieValuedFunction.zero(algebra, n)
        for i in range(n):
            for j in range(i + 1, n):
                comps.setdefault((i, j), zero)
        self.chart = chart
        self.algebra = algebra
        self._comps = comps

    @property
    def components(self) -> dict[tuple[int, int], LieValuedFunction]:
        return dict(self._comps)

    def component(self, i: int, j: int) -> LieValuedFunction:
        if i == j:
            return LieValuedFunction.zero(self.algebra, self.chart.dim)
        if i < j:
            return self._comps[(i, j)]
        return -self._comps[(j, i)]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self._comps.values())

    def __eq__(self, other):
        if not isinstance(other, LieValuedTwoForm):
            return NotImplemented
        return (self.chart == other.chart and self.algebra == other.algebra
                and self._comps == other._comps)

    def __hash__(self):
        return hash((self.chart, tuple(sorted(self._comps))))

    def __add__(self, other: LieValuedTwoForm) -> LieValuedTwoForm:
        _same_chart(self.chart, other.chart)
        return LieValuedTwoForm(self.chart, self.algebra,
                                {k: v + other._comps[k] for k, v in self._comps.items()})

    def __neg__(self) -> LieValuedTwoForm:
        return LieValuedTwoForm(self.chart, self.algebra, {k: -v for k, v in self._comps.items()})

    def __sub__(self, other: LieValuedTwoForm) -> LieValuedTwoForm:
        return self + (-other)

    def render(self) -> str:
        labels = self.chart.coord_labels
        parts = [f"[{c.render(labels)}] d{labels[i]}^d{labels[j]}"
                 for (i, j), c in sorted(self._comps.items()) if not c.is_zero()]
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"LieValuedTwoForm({self.render()!r})"


@dataclass(frozen=True)
class InvariantField:
    base: VectorField
    vert: LieValuedFunction

    def __post_init__(self):
        if self.vert.num_vars != self.base.chart.dim:
            raise ChartMismatch("vertical part and base field live on different charts")

    @property
    def chart(self) -> Chart:
        return self.base.chart

    @property
    def algebra(self) -> LieAlgebra:
        return self.vert.algebra

    def __add__(self, other: InvariantField) -> InvariantField:
        return InvariantField(self.base + other.base, self.vert + other.vert)

    def __sub__(self, other: InvariantField) -> InvariantField:
        return InvariantField(self.base - other.base, self.vert - other.vert)

    def __mul__(self, f) -> InvariantField:
        return InvariantField(self.base * f, self.vert * f)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.base.is_zero() and self.vert.is_zero()

    def render(self) -> str:
        return f"({self.base.render()}, {self.vert.render(self.chart.coord_labels)})"


def vf_bracket(v: VectorField, w: VectorField) -> VectorField:
    """``[V, W]_k = sum_i (V_i d_i W_k - W_i d_i V_k)``."""
    _same_chart(v.chart, w.chart)
    return VectorField(v.chart, [v.apply(wk) - w.apply(vk)
                                 for vk, wk in zip(v.components, w.components)])


def invariant_bracket(a: InvariantField, b: InvariantField) -> InvariantField:
    """Bracket of invariant fields ``(Z1, psi1)`` and ``(Z2, psi2)``.

    Base part ``[Z1, Z2]``; vertical part
    ``Z1(psi2) - Z2(psi1) + s * [psi1, psi2]`` with ``s`` the current vertical sign.
    """
    _same_chart(a.chart, b.chart)
    if a.algebra != b.algebra:
        raise AlgebraMismatch(f"{a.algebra.name!r} vs {b.algebra.name!r}")
    base = vf_bracket(a.base, b.base)
    vert = a.base.apply_lie(b.vert) - b.base.apply_lie(a.vert)
    if not a.algebra.is_abelian():
        vert = vert + lie_bracket(a.vert, b.vert) * current_vertical_sign()
    return InvariantField(base, vert)


def differential(chart: Chart, f: LieValuedFunction) -> LieValuedOneForm:
    """``df = sum_i d_i f dz_i``."""
    return LieValuedOneForm(chart, f.algebra, [f.diff(i) for i in range(chart.dim)])


def exterior_derivative(omega: LieValuedOneForm) -> LieValuedTwoForm:
    """``(d omega)_ij = d_i omega_j - d_j omega_i``."""
    n = omega.chart.dim
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            comps[(i, j)] = omega.components[j].diff(i) - omega.components[i].diff(j)
    return LieValuedTwoForm(omega.chart, omega.algebra, comps)


def contract(omega: LieValuedTwoForm, w: VectorField) -> LieValuedOneForm:
    """Interior product ``(i_W Omega)_j = sum_i W_i Omega_ij``."""
    _same_chart(omega.chart, w.chart)
    n = omega.chart.dim
    zero = LieValuedFunction.zero(omega.algebra, n)
    out = []
    for j in range(n):
        acc = zero
        for i, wi in enumerate(w.components):
            if i != j and not wi.is_zero():
                acc = acc + omega.component(i, j) * wi
        out.append(acc)
    return LieValuedOneForm(omega.chart, omega.algebra, out)


def pullback_oneform(omega: LieValuedOneForm, phi: Sequence[Poly],
                     source: Chart | None = None) -> LieValuedOneForm:
    """Pull ``omega`` back along the polynomial map ``phi: source -> omega.chart``.

    ``(phi^* omega)_i = sum_j (omega_j o phi) * d_i phi_j``.
    """
    phi = tuple(phi)
    if len(phi) != omega.chart.dim:
        raise DimensionError(
            f"map has {len(phi)} components, target chart has dimension {omega.chart.dim}")
    m = phi[0].num_vars
    if source is None:
        source = Chart.standard(m) if m != omega.chart.dim else omega.chart
    if source.dim != m:
        raise DimensionError("source chart dimension differs from map arity")
    pulled = [c.compose(phi) for c in omega.components]
    out = []
    for i in range(m):
        acc = LieValuedFunction.zero(omega.algebra, m)
        for j, pj in enumerate(phi):
            dij = pj.diff(i)
            if not dij.is_zero():
                acc = acc + pulled[j] * dij
        out.append(acc)
    return LieValuedOneForm(source, omega.algebra, out)
