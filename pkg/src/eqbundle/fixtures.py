"""Worked examples and seeded random generators.

The named builders return the exact objects behind the shipped scene files.
The ``random_*`` helpers drive the randomized property and acceptance suites;
all take an explicit :class:`random.Random`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .calculus import Chart, LieValuedOneForm, VectorField
from .connections import Connection, GAction, GConnection, PhiZero, tilde_eta
from .foliations import Foliation, PartialConnection
from .lie import LieAlgebra, LieValuedFunction, abelian, affine_line, gl, gl_identity, sl2
from .poly import Poly, monomials_up_to
from .scalars import Scalar


def c2() -> Chart:
    return Chart(("x", "y"))


def line_algebra(label: str = "e", name: str = "C") -> LieAlgebra:
    return abelian(1, name, [label])


@dataclass(frozen=True)
class Example:
    chart: Chart
    eta: Connection
    action: GAction
    h: GConnection


def _one_form(chart: Chart, alg: LieAlgebra, comps) -> Connection:
    return Connection(LieValuedOneForm(chart, alg, comps))


def center_glr(r: int = 2, eta: Connection | None = None) -> Example:
    """gl(r)-bundle with the center acting by scalars and trivially on the base.

    The G-connection sends the generator to the constant vertical field ``Id``.
    """
    chart = c2()
    alg = gl(r)
    n = chart.dim
    g = abelian(1, "C*", ["t"])
    action = GAction(g, [VectorField.zero(chart)])
    ident = LieValuedFunction.constant(alg, n, gl_identity(r))
    h = GConnection.from_verts(action, [ident])
    if eta is None:
        x, y = chart.coords()
        # any polynomial connection works here
        ax = LieValuedFunction.basis(alg, n, 1, x * y)
        ay = LieValuedFunction.basis(alg, n, r, x + 2) + LieValuedFunction.basis(alg, n, 0, y * y)
        eta = _one_form(chart, alg, [ax, ay])
    return Example(chart, eta, action, h)


def c2_translation() -> Example:
    """Line bundle on C^2 with connection form ``x dy`` and the translation ``d/dx`` lifted trivially."""
    chart = c2()
    alg = line_algebra()
    x, _ = chart.coords()
    eta = _one_form(chart, alg, [LieValuedFunction.zero(alg, 2), LieValuedFunction(alg, [x])])
    action = GAction(line_algebra("v", "C"), [VectorField.coordinate(chart, 0)])
    h = GConnection.from_verts(action, [LieValuedFunction.zero(alg, 2)])
    return Example(chart, eta, action, h)


def translation_action(chart: Chart, directions: list[int]) -> GAction:
    g = abelian(len(directions), f"t{len(directions)}", [f"v{k + 1}" for k in range(len(directions))])
    return GAction(g, [VectorField.coordinate(chart, i) for i in directions])


@dataclass(frozen=True)
class FoliationExample:
    name: str
    eta: Connection
    partial: PartialConnection
    expected: bool
    expected_clause: str | None


def foliation_examples() -> list[FoliationExample]:
    chart = c2()
    alg = line_algebra()
    x, y = chart.coords()
    z = LieValuedFunction.zero(alg, 2)
    samples = [(1, 2), (-3, 5), (2, -7)]
    dx = VectorField.coordinate(chart, 0)
    fol_x = Foliation([dx], samples)

    flat_y = _one_form(chart, alg, [z, LieValuedFunction(alg, [y])])
    twisted = _one_form(chart, alg, [z, LieValuedFunction(alg, [x])])
    # exact form d(xy) = y dx + x dy, foliation along d/dx + d/dy
    exact = _one_form(chart, alg, [LieValuedFunction(alg, [y]), LieValuedFunction(alg, [x])])
    diag = Foliation([VectorField(chart, [chart.const(1), chart.const(1)])], samples)
    return [
        FoliationExample("fol_flat_ydy", flat_y, PartialConnection(fol_x, (z,)), True, None),
        FoliationExample("fol_twisted_xdy", twisted, PartialConnection(fol_x, (z,)), False, "contraction"),
        FoliationExample("fol_exact_diagonal", exact,
                         PartialConnection(diag, (LieValuedFunction(alg, [-(x + y)]),)), True, None),
    ]


# random generation -----------------------------------------------------

def random_scalar(rng: random.Random, bound: int = 3, complex_: bool = False) -> Scalar:
    re = rng.randint(-bound, bound)
    im = rng.randint(-bound, bound) if complex_ else 0
    if rng.random() < 0.2:
        return Scalar(re, im) / rng.randint(1, 3)
    return Scalar(re, im)


def random_poly(rng: random.Random, num_vars: int, max_degree: int = 2, density: float = 0.5,
                bound: int = 3, complex_: bool = False, vars_used: list[int] | None = None) -> Poly:
    """Random polynomial; ``vars_used`` restricts which variables may appear."""
    terms = {}
    for exp in monomials_up_to(num_vars, max_degree):
        if vars_used is not None and any(k and i not in vars_used for i, k in enumerate(exp)):
            continue
        if rng.random() < density:
            terms[exp] = random_scalar(rng, bound, complex_)
    return Poly(num_vars, terms)


def random_lvf(rng: random.Random, alg: LieAlgebra, num_vars: int, **kw) -> LieValuedFunction:
    return LieValuedFunction(alg, [random_poly(rng, num_vars, **kw) for _ in range(alg.dim)])


def random_vector_field(rng: random.Random, chart: Chart, **kw) -> VectorField:
    return VectorField(chart, [random_poly(rng, chart.dim, **kw) for _ in range(chart.dim)])


def random_connection(rng: random.Random, chart: Chart, alg: LieAlgebra, **kw) -> Connection:
    return _one_form(chart, alg, [random_lvf(rng, alg, chart.dim, **kw) for _ in range(chart.dim)])


def invariant_connection(rng: random.Random, chart: Chart, alg: LieAlgebra, directions: list[int],
                         horizontal: bool = True, **kw) -> Connection:
    """Connection independent of the coordinates in ``directions``.

    With ``horizontal`` the components along those directions vanish too, so
    the translations are horizontal and ``i_{d_k} K = 0``.
    """
    others = [i for i in range(chart.dim) if i not in directions]
    comps = []
    for i in range(chart.dim):
        if horizontal and i in directions:
            comps.append(LieValuedFunction.zero(alg, chart.dim))
        else:
            comps.append(random_lvf(rng, alg, chart.dim, vars_used=others, **kw))
    return _one_form(chart, alg, comps)


def random_action(rng: random.Random, chart: Chart, g_dim: int) -> GAction:
    """A random infinitesimal action drawn from a few families with exactly known brackets."""
    n = chart.dim
    if g_dim == 1:
        return GAction(abelian(1, "C", ["v"]), [random_vector_field(rng, chart, max_degree=2, density=0.4)])
    family = rng.choice(["translations", "commuting", "affine"] if n >= 2 else ["affine"])
    if family == "translations":
        dirs = rng.sample(range(n), 2)
        return translation_action(chart, dirs)
    if family == "commuting" and n >= 2:
        # d_i and f(others) d_j commute when f does not involve x_i
        i, j = rng.sample(range(n), 2)
        f = random_poly(rng, n, 2, vars_used=[k for k in range(n) if k != i])
        if f.is_zero():
            f = chart.const(1)
        w = [chart.zero()] * n
        w[j] = f
        return GAction(abelian(2, "c2", ["v1", "v2"]), [VectorField.coordinate(chart, i), VectorField(chart, w)])
    # [x d_x, d_x] = -d_x: anti-homomorphism of aff(1) with [a, b] = b
    i = rng.randrange(n)
    xi = VectorField(chart, [chart.coord(i) if k == i else chart.zero() for k in range(n)])
    return GAction(affine_line(), [xi, VectorField.coordinate(chart, i)])


def planted_theorem1(rng: random.Random, chart: Chart, alg: LieAlgebra, max_degree: int = 2
                     ) -> tuple[Connection, GAction, PhiZero]:
    """A triple ``(eta, action, phi0)`` for which ``phi_tilde(phi0) = -Pi`` holds by construction.

    Translations along ``d_0`` (and ``d_1`` when ``g`` is 2-dimensional) act on
    a connection that does not depend on the translated coordinates; ``phi0(v)``
    is planted as the component ``A(a(v))``. For abelian structure algebras with
    a single generator a random gauge twist ``-dPsi`` is added, where
    ``d_0 Psi = psi`` for a random ``psi``; ``phi0`` is unaffected.
    """
    n = chart.dim
    g_dim = rng.choice([1, 2]) if n >= 3 else 1
    dirs = list(range(g_dim))
    action = translation_action(chart, dirs)
    others = [i for i in range(n) if i not in dirs]
    planted = [random_lvf(rng, alg, n, max_degree=max_degree, vars_used=others) for _ in dirs]
    comps = []
    for i in range(n):
        if i in dirs:
            comps.append(planted[dirs.index(i)])
        else:
            comps.append(random_lvf(rng, alg, n, max_degree=max_degree, vars_used=others))
    form = LieValuedOneForm(chart, alg, comps)
    if alg.is_abelian() and g_dim == 1:
        psi = random_lvf(rng, alg, n, max_degree=max_degree - 1 if max_degree else 0)
        big_psi = psi.integrate(0)
        form = form - LieValuedOneForm(chart, alg, [big_psi.diff(i) for i in range(n)])
    return Connection(form), action, PhiZero(tuple(planted))


# flow fixtures ---------------------------------------------------------

@dataclass(frozen=True)
class FlowFixture:
    """A field and frame with a known bracket verdict.

    For bracket-false fixtures ``deviation_at_1`` is the span deviation of the
    transported frame at ``t = 1`` from ``start``, computed from the closed-form
    flow; it is ``0.0`` for bracket-true fixtures.
    """

    name: str
    field: VectorField
    frame: tuple[VectorField, ...]
    start: tuple[Fraction, ...]
    bracket_holds: bool
    deviation_at_1: float


def _vf(chart: Chart, *comps) -> VectorField:
    return VectorField(chart, [c if isinstance(c, Poly) else chart.const(c) for c in comps])


def lemma1_fixtures() -> list[FlowFixture]:
    r2, r3 = c2(), Chart(("x", "y", "z"))
    x, y = r2.coords()
    X, Y, _ = r3.coords()
    dx, dy = _vf(r2, 1, 0), _vf(r2, 0, 1)
    rot = _vf(r2, -y, x)
    h = Fraction(1, 2)
    s2 = math.sqrt(2.0)
    e = math.e
    stretch = (e - 1) / (s2 * math.sqrt(e * e + 1))  # (e, 1) against span{(1, 1)}
    shear = 1 / s2                                     # (1, 1) against span{(1, 0)}
    true_cases = [
        ("translate_x_frame_dy", dx, (dy,), (0, 0)),
        ("shear_x_dy_frame_dy", _vf(r2, 0, x), (dy,), (1, 0)),
        ("scale_x_frame_dx", _vf(r2, x, 0), (dx,), (1, h)),
        ("rotation_radial_frame", rot, (_vf(r2, x, y),), (1, h)),
        ("translate_x_full_frame", dx, (dx, dy), (h, -1)),
        ("r3_dz_contact_frame", _vf(r3, 0, 0, 1), (_vf(r3, 1, 0, 0), _vf(r3, 0, 1, X)), (1, 0, 0)),
        ("r3_x_dy_frame_dy_dz", _vf(r3, 0, X, 0), (_vf(r3, 0, 1, 0), _vf(r3, 0, 0, 1)), (1, 1, 0)),
        ("scale_y_frame_dx", _vf(r2, 0, y), (dx,), (0, 1)),
        ("euler_frame_dx", _vf(r2, x, y), (dx,), (1, 1)),
        ("diagonal_antidiagonal", _vf(r2, 1, 1), (_vf(r2, 1, -1),), (0, 0)),
    ]
    false_cases = [
        ("shear_x_dy_frame_dx", _vf(r2, 0, x), (dx,), (1, 0), shear),
        ("shear_y_dx_frame_dy", _vf(r2, y, 0), (dy,), (0, 1), shear),
        ("translate_x_frame_x_dx_dy", dx, (_vf(r2, x, 1),), (0, 0), shear),
        ("rotation_frame_dx", rot, (dx,), (1, 0), math.sin(1.0)),
        ("scale_x_frame_diagonal", _vf(r2, x, 0), (_vf(r2, 1, 1),), (1, 1), stretch),
        ("r3_x_dz_frame_dx_dy", _vf(r3, 0, 0, X), (_vf(r3, 1, 0, 0), _vf(r3, 0, 1, 0)), (1, 0, 0), shear),
        ("r3_y_dx_frame_dy_dz", _vf(r3, Y, 0, 0), (_vf(r3, 0, 1, 0), _vf(r3, 0, 0, 1)), (0, 1, 0), shear),
        ("parabolic_shear_frame_dx", _vf(r2, 0, x * x), (dx,), (1, 0), 2 / math.sqrt(5.0)),
        ("scale_y_frame_diagonal", _vf(r2, 0, y), (_vf(r2, 1, 1),), (1, 1), stretch),
        ("drift_shear_frame_dx", _vf(r2, 1, x), (dx,), (0, 0), shear),
    ]
    out = [FlowFixture(n, f, fr, tuple(Fraction(c) for c in s), True, 0.0) for n, f, fr, s in true_cases]
    out += [FlowFixture(n, f, fr, tuple(Fraction(c) for c in s), False, d) for n, f, fr, s, d in false_cases]
    return out


# shipped scenes --------------------------------------------------------

def _flow_spec(fx: FlowFixture, **kw):
    from .scene import FlowSpec
    return FlowSpec(name=fx.name, field=fx.field, frame=fx.frame,
                    start_points=(tuple(Scalar(c) for c in fx.start),),
                    t_max=1.0, steps=1000, tolerance=1e-6, **kw)


def shipped_scenes() -> dict:
    """Every shipped scene, keyed by file stem."""
    from .scene import Scene

    scenes = {}
    a = center_glr()
    scenes["center_glr"] = Scene(
        name="center_glr",
        description="gl(2) bundle on C^2; the center C* acts by scalars, trivially on the base, "
                    "with G-connection h(1) = (0, Id).",
        seed=1, chart=a.chart, h=a.eta.algebra, connection=a.eta,
        g=a.action.g_algebra, action=a.action, g_connection=a.h)

    b = c2_translation()
    _, y = b.chart.coords()
    alg = b.eta.algebra
    n = b.chart.dim
    t = Poly.var(3, 2)
    flow_map = (Poly.var(3, 0) + t, Poly.var(3, 1))
    minus_y = LieValuedFunction(alg, [-y])
    scenes["c2_translation"] = Scene(
        name="c2_translation",
        description="Line bundle on C^2 with connection form x dy; translation d/dx lifted with "
                    "zero vertical part.",
        seed=2, chart=b.chart, h=alg, connection=b.eta,
        g=b.action.g_algebra, action=b.action, g_connection=b.h,
        phi0=PhiZero((minus_y,)), max_degree=1,
        flows=(
            _flow_spec(FlowFixture("translate_zero_lift", VectorField.coordinate(b.chart, 0),
                                   (VectorField.coordinate(b.chart, 1),), (Fraction(0), Fraction(0)),
                                   True, 0.0),
                       flow_map=flow_map, lift_vert=LieValuedFunction.zero(alg, n),
                       t_values=(Scalar(1), Scalar(-2))),
            _flow_spec(FlowFixture("translate_gauge_lift", VectorField.coordinate(b.chart, 0),
                                   (VectorField.coordinate(b.chart, 1),), (Fraction(1), Fraction(1)),
                                   True, 0.0),
                       flow_map=flow_map, lift_vert=minus_y,
                       t_values=(Scalar(1), Scalar(1, 1) / 3)),
        ))

    for fx in foliation_examples():
        p = fx.partial
        scenes[fx.name] = Scene(
            name=fx.name,
            description=f"Rank-{p.foliation.rank} foliation with a partial connection; "
                        f"strongly adapted: {'yes' if fx.expected else 'no'}.",
            seed=3, chart=fx.eta.chart, h=fx.eta.algebra, connection=fx.eta,
            frame=p.foliation.frame, samples=p.foliation.sample_points, deltas=p.deltas)

    sl = sl2()
    r2 = c2()
    xx, yy = r2.coords()
    comps = [LieValuedFunction.zero(sl, 2),
             LieValuedFunction(sl, [r2.const(1), yy, yy * yy - 1])]
    eta = Connection(LieValuedOneForm(r2, sl, comps))
    act = translation_action(r2, [0])
    scenes["sl2_invariant"] = Scene(
        name="sl2_invariant",
        description="sl(2) connection on C^2 independent of x and horizontal along d/dx.",
        seed=4, chart=r2, h=sl, connection=eta, g=act.g_algebra, action=act,
        g_connection=tilde_eta(eta, act), phi0=PhiZero((LieValuedFunction.zero(sl, 2),)),
        max_degree=1)

    planar = [fx for fx in lemma1_fixtures() if fx.field.chart.dim == 2]
    r2_alg = line_algebra()
    scenes["lemma1_planar"] = Scene(
        name="lemma1_planar",
        description="Planar fields with distributions, half preserved by the flow and half not.",
        seed=5, chart=c2(), h=r2_alg, connection=Connection.trivial(c2(), r2_alg),
        flows=tuple(_flow_spec(fx) for fx in planar))
    return scenes


def shipped_scene_names() -> list[str]:
    root = resources.files("eqbundle").joinpath("scenes")
    return sorted(p.name.removesuffix(".scene.json") for p in root.iterdir()
                  if p.name.endswith(".scene.json"))


def shipped_scene_path(name: str):
    """Filesystem path of a shipped scene file."""
    return resources.files("eqbundle").joinpath("scenes", f"{name}.scene.json")


def write_shipped_scenes(directory) -> list[str]:
    from pathlib import Path

    from .scene import serialize_scene
    out = []
    for name, scene in sorted(shipped_scenes().items()):
        path = Path(directory) / f"{name}.scene.json"
        path.write_text(serialize_scene(scene), encoding="utf-8")
        out.append(str(path))
    return out


def random_scene(rng: random.Random):
    """A random valid scene touching every optional section with some probability."""
    from .scene import FlowSpec, Scene

    n = rng.choice([1, 2, 3])
    chart = Chart.standard(n)
    h = rng.choice([line_algebra(), abelian(2), sl2(), gl(2)])
    eta = random_connection(rng, chart, h, max_degree=2, density=0.3, complex_=True)
    kw = {}
    if rng.random() < 0.7:
        action = random_action(rng, chart, rng.choice([1, 2]) if n >= 2 else 1)
        kw.update(g=action.g_algebra, action=action)
        if rng.random() < 0.7:
            kw["g_connection"] = GConnection.from_verts(
                action, [random_lvf(rng, h, n, max_degree=1) for _ in range(action.dim)])
        if rng.random() < 0.5:
            kw["phi0"] = PhiZero(tuple(random_lvf(rng, h, n, max_degree=1) for _ in range(action.dim)))
        if rng.random() < 0.5:
            kw["max_degree"] = rng.randint(0, 2)
    if rng.random() < 0.5:
        frame = (VectorField.coordinate(chart, 0),)
        kw["frame"] = frame
        if rng.random() < 0.5:
            kw["samples"] = tuple(tuple(random_scalar(rng) for _ in range(n)) for _ in range(3))
        if rng.random() < 0.5:
            kw["deltas"] = (random_lvf(rng, h, n, max_degree=1),)
    if rng.random() < 0.5:
        field = random_vector_field(rng, chart, max_degree=1)
        extra = {}
        if rng.random() < 0.5:
            t = Poly.var(n + 1, n)
            extra["flow_map"] = tuple(Poly.var(n + 1, i) + t if i == 0 else Poly.var(n + 1, i)
                                      for i in range(n))
            field = VectorField.coordinate(chart, 0)
            extra["lift_vert"] = random_lvf(rng, h, n, max_degree=1)
            extra["t_values"] = (random_scalar(rng),)
        kw["flows"] = (FlowSpec(name="f0", field=field, frame=(VectorField.coordinate(chart, n - 1),),
                                start_points=((random_scalar(rng),) * n,), t_max=rng.choice([0.5, 1.0]),
                                steps=rng.randint(10, 50), tolerance=1e-6, checkpoints=5, **extra),)
    return Scene(name=f"random_{rng.randrange(10**6)}", chart=chart, h=h, connection=eta,
                 description=rng.choice(["", "random scene"]),
                 seed=rng.choice([None, rng.randrange(2**64)]),
                 vertical_sign=rng.choice([None, 1, -1]), **kw)
