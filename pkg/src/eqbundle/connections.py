"""Connections, G-connections, and the adaptedness decision procedures.

Conventions, all on a trivialized bundle ``chart x H``:

* A connection is an h-valued 1-form ``A``; the horizontal lift of ``W`` is
  the invariant field ``(W, -A(W))``.
* The vertical projection along the horizontal distribution is
  ``vert((Z, psi)) = psi + A(Z)``.
* Curvature is the plain bracket defect ``K(V, W) = vert([lift V, lift W])``,
  so on coordinate fields ``K_ij = -(d_i A_j - d_j A_i) + s [A_i, A_j]``
  with ``s`` the vertical bracket sign. No factor 2.
* A G-connection assigns to each basis vector ``v`` of g an invariant field
  ``(a(v), psi_v)`` whose base part is the infinitesimal action.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .calculus import (
    Chart,
    InvariantField,
    LieValuedOneForm,
    LieValuedTwoForm,
    VectorField,
    contract,
    current_vertical_sign,
    exterior_derivative,
    invariant_bracket,
    vf_bracket,
)
from .errors import AlgebraMismatch, ChartMismatch, ConventionError, DimensionError
from .lie import LieAlgebra, LieValuedFunction, lie_bracket
from .linalg import LinearSystem, solve_linear
from .poly import Poly, monomials_up_to
from .verdict import Verdict

__all__ = [
    "Connection",
    "GAction",
    "GConnection",
    "GCurvature",
    "GTensor",
    "PhiZero",
    "Phi0Solution",
    "Theorem1Result",
    "curvature",
    "curvature_closed_form",
    "g_curvature",
    "is_adapted",
    "is_strongly_adapted",
    "tilde_eta",
    "contraction_criterion",
    "phi_tilde",
    "pi_tensor",
    "theorem1_check",
    "solve_phi0",
    "phi0_from_gconnection",
    "gconnection_from_phi0",
]


class Connection:
    __slots__ = ("form",)

    def __init__(self, form: LieValuedOneForm):
        self.form = form

    @classmethod
    def from_components(cls, chart: Chart, algebra: LieAlgebra,
                        components: Sequence[LieValuedFunction]) -> Connection:
        return cls(LieValuedOneForm(chart, algebra, components))

    @classmethod
    def trivial(cls, chart: Chart, algebra: LieAlgebra) -> Connection:
        return cls(LieValuedOneForm.zero(chart, algebra))

    @property
    def chart(self) -> Chart:
        return self.form.chart

    @property
    def algebra(self) -> LieAlgebra:
        return self.form.algebra

    def lift(self, w: VectorField) -> InvariantField:
        """Horizontal lift ``(W, -A(W))``."""
        return InvariantField(w, -self.form(w))

    def coordinate_lift(self, i: int) -> InvariantField:
        return self.lift(VectorField.coordinate(self.chart, i))

    def vertical(self, xi: InvariantField) -> LieValuedFunction:
        """Component of ``xi`` along the fibres, relative to the horizontal distribution."""
        return xi.vert + self.form(xi.base)

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return self.form == other.form

    def __hash__(self):
        return hash(self.form)

    def __repr__(self):
        return f"Connection({self.form.render()!r})"


class GAction:
    """Infinitesimal action of g on the chart: one vector field per basis vector of g.

    ``epsilon`` is +1 when ``v -> a(v)`` preserves brackets and -1 when it
    reverses them. When not given it is detected from the generators; a
    :class:`ConventionError` is raised if neither sign works.
    """

    __slots__ = ("g_algebra", "generators", "epsilon")

    def __init__(self, g_algebra: LieAlgebra, generators: Sequence[VectorField],
                 epsilon: int | None = None):
        gens = tuple(generators)
        if len(gens) != g_algebra.dim:
            raise DimensionError(f"{len(gens)} generators for g of dim {g_algebra.dim}")
        if not gens:
            raise DimensionError("g must have positive dimension")
        chart = gens[0].chart
        for g in gens:
            if g.chart != chart:
                raise ChartMismatch("generators live on different charts")
        self.g_algebra = g_algebra
        self.generators = gens
        if epsilon is None:
            for eps in (1, -1):
                if self._bracket_defect(eps) is None:
                    epsilon = eps
                    break
            else:
                raise ConventionError(
                    "generators are neither a homomorphism nor an anti-homomorphism of g")
        elif epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        elif (bad := self._bracket_defect(epsilon)) is not None:
            raise ConventionError(
                f"[a(v{bad[0]}), a(v{bad[1]})] != {epsilon} * a([v{bad[0]}, v{bad[1]}])")
        self.epsilon = epsilon

    @property
    def chart(self) -> Chart:
        return self.generators[0].chart

    @property
    def dim(self) -> int:
        return len(self.generators)

    def field_of(self, coords: Sequence) -> VectorField:
        """Fundamental field of the element ``sum_k coords[k] v_k``."""
        out = VectorField.zero(self.chart)
        for c, g in zip(coords, self.generators):
            if c:
                out = out + g * c
        return out

    def _bracket_defect(self, eps: int) -> tuple[int, int] | None:
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                lhs = vf_bracket(self.generators[i], self.generators[j])
                rhs = self.field_of([self.g_algebra.c(i, j, k) for k in range(self.dim)])
                if lhs != rhs * eps:
                    return (i, j)
        return None

    def __eq__(self, other):
        if not isinstance(other, GAction):
            return NotImplemented
        return (self.g_algebra == other.g_algebra and self.generators == other.generators
                and self.epsilon == other.epsilon)

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        gens = ", ".join(g.render() for g in self.generators)
        return f"GAction({self.g_algebra.name!r}, [{gens}], epsilon={self.epsilon})"


class GConnection:
    """Lifts ``h(v) = (a(v), psi_v)`` of the action generators to invariant fields."""

    __slots__ = ("action", "lifts")

    def __init__(self, action: GAction, lifts: Sequence[InvariantField]):
        lifts = tuple(lifts)
        if len(lifts) != action.dim:
            raise DimensionError(f"{len(lifts)} lifts for {action.dim} generators")
        for k, (lift, gen) in enumerate(zip(lifts, action.generators)):
            if lift.base != gen:
                raise ValueError(
                    f"lift {k} has base {lift.base.render()}, generator is {gen.render()}")
        if len({lift.algebra for lift in lifts}) != 1:
            raise AlgebraMismatch("lifts take values in different algebras")
        self.action = action
        self.lifts = lifts

    @classmethod
    def from_verts(cls, action: GAction, verts: Sequence[LieValuedFunction]) -> GConnection:
        return cls(action, [InvariantField(g, psi) for g, psi in zip(action.generators, verts)])

    @property
    def algebra(self) -> LieAlgebra:
        return self.lifts[0].algebra

    @property
    def chart(self) -> Chart:
        return self.action.chart

    @property
    def verts(self) -> tuple[LieValuedFunction, ...]:
        return tuple(lift.vert for lift in self.lifts)

    def apply(self, coords: Sequence) -> InvariantField:
        """``h`` applied to ``sum_k coords[k] v_k``."""
        out = InvariantField(VectorField.zero(self.chart),
                             LieValuedFunction.zero(self.algebra, self.chart.dim))
        for c, lift in zip(coords, self.lifts):
            if c:
                out = out + lift * c
        return out

    def __eq__(self, other):
        if not isinstance(other, GConnection):
            return NotImplemented
        return self.action == other.action and self.verts == other.verts

    def __hash__(self):
        return hash(self.verts)

    def __repr__(self):
        return "GConnection([" + ", ".join(l.render() for l in self.lifts) + "])"


@dataclass(frozen=True)
class GCurvature:
    """Curvature of a G-connection on basis pairs ``(i, j)``, ``i < j``."""

    g_algebra: LieAlgebra
    values: dict[tuple[int, int], LieValuedFunction]

    def value(self, i: int, j: int) -> LieValuedFunction | None:
        if i == j:
            return None
        if i < j:
            return self.values[(i, j)]
        return -self.values[(j, i)]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())


@dataclass(frozen=True)
class GTensor:
    """Ad-valued tensor indexed by (g-basis index, chart coordinate index)."""

    values: dict[tuple[int, int], LieValuedFunction]

    def __getitem__(self, key: tuple[int, int]) -> LieValuedFunction:
        return self.values[key]

    def __add__(self, other: GTensor) -> GTensor:
        return GTensor({k: v + other.values[k] for k, v in self.values.items()})

    def __neg__(self) -> GTensor:
        return GTensor({k: -v for k, v in self.values.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def first_nonzero(self) -> tuple[tuple[int, int], LieValuedFunction] | None:
        for key in sorted(self.values):
            if not self.values[key].is_zero():
                return key, self.values[key]
        return None


@dataclass(frozen=True)
class PhiZero:
    """An h-valued function for each basis vector of g."""

    values: tuple[LieValuedFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k: int) -> LieValuedFunction:
        return self.values[k]

    def __add__(self, other: PhiZero) -> PhiZero:
        return PhiZero(tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: PhiZero) -> PhiZero:
        return PhiZero(tuple(a - b for a, b in zip(self.values, other.values)))

    def scaled(self, c) -> PhiZero:
        return PhiZero(tuple(v * c for v in self.values))


@dataclass(frozen=True)
class Phi0Solution:
    """A particular solution and a basis of the solution space of the homogeneous system."""

    phi0: PhiZero
    kernel: tuple[PhiZero, ...] = ()
    max_degree: int = 0


@dataclass(frozen=True)
class Theorem1Result(Verdict):
    g_connection: GConnection | None = None
    phi_tilde: GTensor | None = None
    pi: GTensor | None = None


def _check_compatible(eta: Connection, action: GAction) -> None:
    if eta.chart != action.chart:
        raise ChartMismatch("connection and action live on different charts")


# curvature -------------------------------------------------------------

def curvature(eta: Connection) -> LieValuedTwoForm:
    """Curvature from brackets of horizontal lifts of coordinate fields."""
    n = eta.chart.dim
    lifts = [eta.coordinate_lift(i) for i in range(n)]
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = invariant_bracket(lifts[i], lifts[j])
            # [d_i, d_j] = 0, so the second term of the defect vanishes
            comps[(i, j)] = eta.vertical(br)
    return LieValuedTwoForm(eta.chart, eta.algebra, comps)


def curvature_closed_form(eta: Connection) -> LieValuedTwoForm:
    """``-dA + s [A_i, A_j]``; an independent route to :func:`curvature`."""
    d_a = exterior_derivative(eta.form)
    s = current_vertical_sign()
    n = eta.chart.dim
    a = eta.form.components
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            comps[(i, j)] = -d_a.component(i, j) + lie_bracket(a[i], a[j]) * s
    return LieValuedTwoForm(eta.chart, eta.algebra, comps)


def g_curvature(h: GConnection) -> GCurvature:
    """``K(h)(v_i, v_j) = [h(v_i), h(v_j)] - epsilon * h([v_i, v_j])`` on basis pairs.

    The base parts must cancel; otherwise the action's bracket convention does
    not match g and :class:`ConventionError` is raised.
    """
    g = h.action.g_algebra
    eps = h.action.epsilon
    values = {}
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            br = invariant_bracket(h.lifts[i], h.lifts[j])
            img = h.apply([g.c(i, j, k) for k in range(g.dim)]) * eps
            diff = br - img
            if not diff.base.is_zero():
                raise ConventionError(
                    f"base parts do not cancel for ({g.basis_labels[i]}, {g.basis_labels[j]}): "
                    f"{diff.base.render()}")
            values[(i, j)] = diff.vert
    return GCurvature(g, values)


# adaptedness -----------------------------------------------------------

def _adapted_defects(eta: Connection, h: GConnection):
    n = eta.chart.dim
    coord_lifts = [eta.coordinate_lift(i) for i in range(n)]
    for v, lift in enumerate(h.lifts):
        for i in range(n):
            yield v, i, eta.vertical(invariant_bracket(lift, coord_lifts[i]))


def is_adapted(eta: Connection, h: GConnection) -> Verdict:
    """Is ``[h(v), eta(TX)]`` contained in ``eta(TX)`` for every generator ``v``?

    The vertical part of ``[h(v), eta(W)]`` is function-linear in ``W``, so it
    is enough to test the coordinate frame.
    """
    if eta.chart != h.chart:
        raise ChartMismatch("connection and G-connection live on different charts")
    if eta.algebra != h.algebra:
        raise AlgebraMismatch("connection and G-connection take values in different algebras")
    for v, i, defect in _adapted_defects(eta, h):
        if not defect.is_zero():
            return Verdict(False, clause="adapted",
                           location={"generator": v, "coordinate": i},
                           defect=defect, clauses={"adapted": False})
    return Verdict.ok(adapted=True)


def _image_defect(eta: Connection, h: GConnection):
    for v, lift in enumerate(h.lifts):
        d = eta.vertical(lift)
        if not d.is_zero():
            return v, d
    return None


def is_strongly_adapted(eta: Connection, h: GConnection) -> Verdict:
    """Adapted, and every ``h(v)`` is horizontal (``psi_v + A(a(v)) = 0``).

    Both clauses are always evaluated; ``clause`` names the first failing one
    in the order adapted, image.
    """
    adapted = is_adapted(eta, h)
    image = _image_defect(eta, h)
    clauses = {"adapted": adapted.holds, "image": image is None}
    if not adapted:
        return Verdict(False, clause="adapted", location=adapted.location,
                       defect=adapted.defect, clauses=clauses)
    if image is not None:
        v, d = image
        return Verdict(False, clause="image", location={"generator": v},
                       defect=d, clauses=clauses)
    return Verdict(True, clauses=clauses)


def tilde_eta(eta: Connection, action: GAction) -> GConnection:
    """The G-connection ``v -> eta(a(v))``."""
    _check_compatible(eta, action)
    return GConnection(action, [eta.lift(g) for g in action.generators])


def contraction_criterion(eta: Connection, action: GAction) -> Verdict:
    """Does ``i_{a(v)} K(eta)`` vanish identically for every generator?"""
    _check_compatible(eta, action)
    k = curvature(eta)
    for v, gen in enumerate(action.generators):
        c = contract(k, gen)
        if not c.is_zero():
            return Verdict(False, clause="contraction", location={"generator": v}, defect=c)
    return Verdict(True)


# phi0 and the converse construction ------------------------------------

def phi_tilde(phi0: PhiZero, eta: Connection) -> GTensor:
    """Entry ``(v, i)``: bracket of the vertical field ``phi0(v)`` with ``eta(d_i)``.

    That bracket is purely vertical; a nonzero base part means an internal bug.
    """
    n = eta.chart.dim
    zero_field = VectorField.zero(eta.chart)
    values = {}
    for v, phi in enumerate(phi0.values):
        vertical = InvariantField(zero_field, phi)
        for i in range(n):
            br = invariant_bracket(vertical, eta.coordinate_lift(i))
            assert br.base.is_zero(), "bracket of a vertical and a horizontal field has a base part"
            values[(v, i)] = eta.vertical(br)
    return GTensor(values)


def pi_tensor(eta: Connection, action: GAction) -> GTensor:
    """Entry ``(v, i)`` is ``K(eta)(a(v), d_i)``."""
    _check_compatible(eta, action)
    k = curvature(eta)
    values = {}
    for v, gen in enumerate(action.generators):
        c = contract(k, gen)
        for i in range(eta.chart.dim):
            values[(v, i)] = c.components[i]
    return GTensor(values)


def gconnection_from_phi0(phi0: PhiZero, eta: Connection, action: GAction) -> GConnection:
    """``h(v) = (a(v), phi0(v) - A(a(v)))``, i.e. ``phi0(v)`` plus the horizontal lift of ``a(v)``."""
    _check_compatible(eta, action)
    return GConnection(action, [
        InvariantField(gen, phi - eta.form(gen))
        for gen, phi in zip(action.generators, phi0.values)])


def phi0_from_gconnection(eta: Connection, h: GConnection) -> PhiZero:
    """``phi0(v) = psi_v + A(a(v))``: the difference between ``h(v)`` and the lift of ``a(v)``."""
    return PhiZero(tuple(eta.vertical(lift) for lift in h.lifts))


def theorem1_check(phi0: PhiZero, eta: Connection, action: GAction) -> Theorem1Result:
    """Does ``phi_tilde(phi0) = -Pi`` hold? If so, build the adapted G-connection.

    The constructed ``h`` is re-checked with :func:`is_adapted`; disagreement
    would mean the bracket conventions are inconsistent and raises
    ``AssertionError``.
    """
    _check_compatible(eta, action)
    if len(phi0) != action.dim:
        raise DimensionError(f"phi0 has {len(phi0)} entries for g of dim {action.dim}")
    pt = phi_tilde(phi0, eta)
    pi = pi_tensor(eta, action)
    total = pt + pi
    bad = total.first_nonzero()
    if bad is not None:
        (v, i), d = bad
        return Theorem1Result(False, clause="phi_tilde = -Pi",
                              location={"generator": v, "coordinate": i},
                              defect=d, phi_tilde=pt, pi=pi)
    h = gconnection_from_phi0(phi0, eta, action)
    check = is_adapted(eta, h)
    if not check:
        raise AssertionError(
            f"constructed G-connection is not adapted: {check.location} {check.witness_text()}")
    return Theorem1Result(True, g_connection=h, phi_tilde=pt, pi=pi)


def solve_phi0(eta: Connection, action: GAction, max_degree: int) -> Phi0Solution | None:
    """Search for ``phi0`` with polynomial entries of total degree ``<= max_degree``.

    ``phi_tilde`` is linear in ``phi0``, so matching coefficients of
    ``phi_tilde = -Pi`` gives an exact linear system. Generators decouple and
    are solved one at a time. Returns ``None`` when no solution exists at this
    degree.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    _check_compatible(eta, action)
    n = eta.chart.dim
    alg = eta.algebra
    monos = monomials_up_to(n, max_degree)
    unknowns = [(k, m) for k in range(alg.dim) for m in monos]
    pi = pi_tensor(eta, action)
    zero_field = VectorField.zero(eta.chart)
    lifts = [eta.coordinate_lift(i) for i in range(n)]

    # phi_tilde of each basis unknown, shared by all generators
    columns = []
    for k, m in unknowns:
        unit = LieValuedFunction.basis(alg, n, k, Poly.monomial(m))
        vertical = InvariantField(zero_field, unit)
        columns.append([eta.vertical(invariant_bracket(vertical, lifts[i])) for i in range(n)])

    particular = []
    kernels_per_v = []
    for v in range(action.dim):
        keys = set()
        for col in columns:
            for i in range(n):
                for kk, p in enumerate(col[i].components):
                    keys.update((i, kk, e) for e in p.terms)
        for i in range(n):
            for kk, p in enumerate(pi[(v, i)].components):
                keys.update((i, kk, e) for e in p.terms)
        rows = []
        for i, kk, e in sorted(keys):
            coeffs = tuple(col[i].components[kk].coeff(e) for col in columns)
            rhs = -pi[(v, i)].components[kk].coeff(e)
            rows.append((coeffs, rhs))
        sol = solve_linear(LinearSystem(len(unknowns), tuple(rows)))
        if sol is None:
            return None
        particular.append(_assemble(alg, n, unknowns, sol.particular))
        kernels_per_v.append([_assemble(alg, n, unknowns, vec) for vec in sol.kernel])

    phi0 = PhiZero(tuple(particular))
    zero = LieValuedFunction.zero(alg, n)
    kernel = []
    for v, vecs in enumerate(kernels_per_v):
        for vec in vecs:
            vals = [zero] * action.dim
            vals[v] = vec
            kernel.append(PhiZero(tuple(vals)))
    return Phi0Solution(phi0, tuple(kernel), max_degree)


def _assemble(alg: LieAlgebra, n: int, unknowns, vector) -> LieValuedFunction:
    comps = [dict() for _ in range(alg.dim)]
    for (k, m), c in zip(unknowns, vector):
        if not c.is_zero():
            comps[k][m] = c
    return LieValuedFunction(alg, [Poly(n, t) for t in comps])

