"""Scene documents: JSON parsing with path-precise errors, and canonical serialization."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .calculus import Chart, InvariantField, LieValuedOneForm, VectorField
from .connections import Connection, GAction, GConnection, PhiZero
from .errors import EqBundleError, SceneError
from .flows import NumericFlowProblem
from .foliations import Foliation, PartialConnection, default_sample_points, frame_rank_ok
from .lie import LieAlgebra, LieValuedFunction, jacobi_violation
from .poly import Poly
from .scalars import Scalar

__all__ = ["Scene", "FlowSpec", "parse_scene", "load_scene", "scene_to_dict", "serialize_scene",
           "scene_schema"]

SCHEMA_VERSION = 1


@lru_cache(maxsize=1)
def scene_schema() -> dict:
    text = resources.files("eqbundle").joinpath("data/scene.schema.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class FlowSpec:
    """A named numeric flow problem, optionally with a closed-form flow map."""

    name: str
    field: VectorField
    frame: tuple[VectorField, ...]
    start_points: tuple[tuple[Scalar, ...], ...]
    t_max: float
    steps: int
    tolerance: float
    checkpoints: int = 10
    flow_map: tuple[Poly, ...] | None = None
    lift_vert: LieValuedFunction | None = None
    t_values: tuple[Scalar, ...] = ()

    def problem(self) -> NumericFlowProblem:
        return NumericFlowProblem(self.field, self.frame,
                                  [[float(c) for c in p] for p in self.start_points],
                                  self.t_max, self.steps, self.tolerance,
                                  min(self.checkpoints, self.steps), self.name)


@dataclass(frozen=True)
class Scene:
    name: str
    chart: Chart
    h: LieAlgebra
    connection: Connection
    description: str = ""
    seed: int | None = None
    vertical_sign: int | None = None
    g: LieAlgebra | None = None
    action: GAction | None = None
    g_connection: GConnection | None = None
    phi0: PhiZero | None = None
    max_degree: int | None = None
    frame: tuple[VectorField, ...] | None = None
    samples: tuple[tuple[Scalar, ...], ...] | None = None
    deltas: tuple[LieValuedFunction, ...] | None = None
    flows: tuple[FlowSpec, ...] = field(default=())

    def foliation(self, seed: int) -> Foliation | None:
        """The foliation, sampled at the declared points or at seeded random ones."""
        if self.frame is None:
            return None
        pts = self.samples if self.samples is not None else default_sample_points(self.frame, seed)
        return Foliation(self.frame, pts)

    def partial_connection(self, seed: int) -> PartialConnection | None:
        if self.frame is None or self.deltas is None:
            return None
        return PartialConnection(self.foliation(seed), self.deltas)

    def flow(self, name: str) -> FlowSpec:
        for f in self.flows:
            if f.name == name:
                return f
        raise KeyError(name)

    def digest(self) -> str:
        return hashlib.sha256(serialize_scene(self).encode("utf-8")).hexdigest()

    def default_seed(self) -> int:
        """The scene seed, or one derived from the scene content."""
        if self.seed is not None:
            return self.seed
        return int(self.digest()[:16], 16)


# decoding --------------------------------------------------------------

class _Problem(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(message)
        self.path = path
        self.message = message


def _scalar(q) -> Scalar:
    return Scalar.from_quad(*q)


def _poly(obj, num_vars: int, path: str) -> Poly:
    terms: dict[tuple[int, ...], Scalar] = {}
    for k, t in enumerate(obj):
        exp = tuple(t["exp"])
        if len(exp) != num_vars:
            raise _Problem(f"{path}/{k}/exp", f"expected {num_vars} exponents, found {len(exp)}")
        if exp in terms:
            raise _Problem(f"{path}/{k}/exp", f"repeated exponent {list(exp)}")
        terms[exp] = _scalar(t["coeff"])
    return Poly(num_vars, terms)


def _lvf(obj, alg: LieAlgebra, num_vars: int, path: str) -> LieValuedFunction:
    if len(obj) != alg.dim:
        raise _Problem(path, f"expected {alg.dim} components (dim of {alg.name}), found {len(obj)}")
    return LieValuedFunction(alg, [_poly(p, num_vars, f"{path}/{k}") for k, p in enumerate(obj)])


def _vf(obj, chart: Chart, path: str) -> VectorField:
    if len(obj) != chart.dim:
        raise _Problem(path, f"expected {chart.dim} components (chart dimension), found {len(obj)}")
    return VectorField(chart, [_poly(p, chart.dim, f"{path}/{k}") for k, p in enumerate(obj)])


def _point(obj, dim: int, path: str, real: bool = False) -> tuple[Scalar, ...]:
    if len(obj) != dim:
        raise _Problem(path, f"expected {dim} coordinates, found {len(obj)}")
    pt = tuple(_scalar(q) for q in obj)
    if real and any(not c.is_real() for c in pt):
        raise _Problem(path, "flow start points must be real")
    return pt


def _algebra(obj, path: str) -> LieAlgebra:
    structure: dict[tuple[int, int], dict[int, Scalar]] = {}
    dim = len(obj["basis"])
    for k, entry in enumerate(obj.get("structure", [])):
        i, j, kk = entry["i"], entry["j"], entry["k"]
        where = f"{path}/structure/{k}"
        for key in ("i", "j", "k"):
            if entry[key] >= dim:
                raise _Problem(f"{where}/{key}", f"index {entry[key]} out of range for dim {dim}")
        if i >= j:
            raise _Problem(where, "structure entries must have i < j")
        row = structure.setdefault((i, j), {})
        if kk in row:
            raise _Problem(where, f"repeated entry for [e{i}, e{j}] on e{kk}")
        row[kk] = _scalar(entry["coeff"])
    try:
        alg = LieAlgebra(obj["name"], obj["basis"], structure)
    except (ValueError, EqBundleError) as exc:
        raise _Problem(path, str(exc)) from None
    bad = jacobi_violation(alg)
    if bad is not None:
        names = ", ".join(alg.basis_labels[b] for b in bad)
        raise _Problem(f"{path}/structure", f"Jacobi identity fails on ({names})")
    return alg


def _schema_problems(doc) -> list[tuple[str, str]]:
    validator = jsonschema.Draft202012Validator(scene_schema())
    out = []
    for err in validator.iter_errors(doc):
        path = "/" + "/".join(str(p) for p in err.absolute_path)
        out.append((path, err.message))
    return sorted(set(out))


def parse_scene_dict(doc: Any) -> Scene:
    """Validate a decoded JSON document and build the :class:`Scene`.

    Raises :class:`SceneError` listing ``(document path, message)`` pairs.
    """
    problems = _schema_problems(doc)
    if problems:
        raise SceneError(problems)
    try:
        return _build(doc)
    except _Problem as p:
        raise SceneError([(p.path, p.message)]) from None


def _build(doc: dict) -> Scene:
    chart = Chart(tuple(doc["chart"]["coords"]))
    n = chart.dim
    h = _algebra(doc["h"], "/h")
    conn = doc["connection"]
    if len(conn) != n:
        raise _Problem("/connection", f"expected {n} components (chart dimension), found {len(conn)}")
    connection = Connection(LieValuedOneForm(
        chart, h, [_lvf(c, h, n, f"/connection/{i}") for i, c in enumerate(conn)]))

    g = action = gconn = phi0 = None
    if "g" in doc:
        g = _algebra(doc["g"], "/g")
        gens = doc["action"]["generators"]
        if len(gens) != g.dim:
            raise _Problem("/action/generators", f"expected {g.dim} generators (dim of {g.name}), found {len(gens)}")
        fields = [_vf(v, chart, f"/action/generators/{k}") for k, v in enumerate(gens)]
        try:
            action = GAction(g, fields, doc["action"].get("epsilon"))
        except EqBundleError as exc:
            raise _Problem("/action", str(exc)) from None
        if "lifts" in doc:
            lifts = doc["lifts"]
            if len(lifts) != g.dim:
                raise _Problem("/lifts", f"expected {g.dim} lifts, found {len(lifts)}")
            out = []
            for k, lift in enumerate(lifts):
                if "base" in lift:
                    base = _vf(lift["base"], chart, f"/lifts/{k}/base")
                    if base != fields[k]:
                        raise _Problem(f"/lifts/{k}/base", "base of a lift must equal its action generator")
                out.append(InvariantField(fields[k], _lvf(lift["vert"], h, n, f"/lifts/{k}/vert")))
            gconn = GConnection(action, out)
        if "phi0" in doc:
            vals = doc["phi0"]
            if len(vals) != g.dim:
                raise _Problem("/phi0", f"expected {g.dim} entries, found {len(vals)}")
            phi0 = PhiZero(tuple(_lvf(v, h, n, f"/phi0/{k}") for k, v in enumerate(vals)))

    frame = samples = deltas = None
    if "foliation" in doc:
        fol = doc["foliation"]
        frame = tuple(_vf(v, chart, f"/foliation/frame/{k}") for k, v in enumerate(fol["frame"]))
        if len(frame) > n:
            raise _Problem("/foliation/frame", f"{len(frame)} fields on a {n}-dimensional chart")
        if "samples" in fol:
            samples = tuple(_point(p, n, f"/foliation/samples/{k}") for k, p in enumerate(fol["samples"]))
            for k, pt in enumerate(samples):
                if not frame_rank_ok(frame, pt):
                    raise _Problem(f"/foliation/samples/{k}", "frame is rank deficient at this sample")
        if "deltas" in fol:
            if len(fol["deltas"]) != len(frame):
                raise _Problem("/foliation/deltas", f"expected {len(frame)} deltas, found {len(fol['deltas'])}")
            deltas = tuple(_lvf(d, h, n, f"/foliation/deltas/{k}") for k, d in enumerate(fol["deltas"]))

    flows = []
    names = set()
    for k, f in enumerate(doc.get("flows", [])):
        where = f"/flows/{k}"
        if f["name"] in names:
            raise _Problem(f"{where}/name", f"duplicate flow name {f['name']!r}")
        names.add(f["name"])
        flow_map = None
        if "flow_map" in f:
            if len(f["flow_map"]) != n:
                raise _Problem(f"{where}/flow_map", f"expected {n} components, found {len(f['flow_map'])}")
            flow_map = tuple(_poly(p, n + 1, f"{where}/flow_map/{i}") for i, p in enumerate(f["flow_map"]))
        lift_vert = _lvf(f["lift_vert"], h, n, f"{where}/lift_vert") if "lift_vert" in f else None
        checkpoints = f.get("checkpoints", 10)
        if checkpoints > f["steps"]:
            raise _Problem(f"{where}/checkpoints", "more checkpoints than steps")
        flows.append(FlowSpec(
            name=f["name"],
            field=_vf(f["field"], chart, f"{where}/field"),
            frame=tuple(_vf(v, chart, f"{where}/frame/{i}") for i, v in enumerate(f["frame"])),
            start_points=tuple(_point(p, n, f"{where}/start_points/{i}", real=True)
                               for i, p in enumerate(f["start_points"])),
            t_max=float(f["t_max"]), steps=f["steps"], tolerance=float(f["tolerance"]),
            checkpoints=checkpoints, flow_map=flow_map, lift_vert=lift_vert,
            t_values=tuple(_scalar(q) for q in f.get("t_values", [])),
        ))

    return Scene(
        name=doc["name"], description=doc.get("description", ""), seed=doc.get("seed"),
        vertical_sign=doc.get("vertical_sign"), chart=chart, h=h, connection=connection,
        g=g, action=action, g_connection=gconn, phi0=phi0, max_degree=doc.get("max_degree"),
        frame=frame, samples=samples, deltas=deltas, flows=tuple(flows),
    )


def parse_scene(path: str | Path) -> Scene:
    """Read and validate a scene file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneError([("/", f"cannot read {path}: {exc.strerror}")]) from None
    except UnicodeDecodeError:
        raise SceneError([("/", "file is not valid UTF-8")]) from None
    if not text.strip():
        raise SceneError([("/", "empty document; expected a scene object")])
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError([("/", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")]) from None
    return parse_scene_dict(doc)


load_scene = parse_scene


# encoding --------------------------------------------------------------

def _enc_scalar(c: Scalar) -> list[int]:
    return list(c.to_quad())


def _enc_poly(p: Poly) -> list[dict]:
    return [{"coeff": _enc_scalar(c), "exp": list(e)} for e, c in p.sorted_terms()]


def _enc_lvf(f: LieValuedFunction) -> list:
    return [_enc_poly(p) for p in f.components]


def _enc_vf(v: VectorField) -> list:
    return [_enc_poly(p) for p in v.components]


def _enc_algebra(alg: LieAlgebra) -> dict:
    out: dict[str, Any] = {"name": alg.name, "basis": list(alg.basis_labels)}
    structure = [{"i": i, "j": j, "k": k, "coeff": _enc_scalar(c)}
                 for (i, j), row in alg.structure_upper().items() for k, c in sorted(row.items())]
    if structure:
        out["structure"] = structure
    return out


def scene_to_dict(scene: Scene) -> dict:
    doc: dict[str, Any] = {"schema": SCHEMA_VERSION, "name": scene.name}
    if scene.description:
        doc["description"] = scene.description
    if scene.seed is not None:
        doc["seed"] = scene.seed
    if scene.vertical_sign is not None:
        doc["vertical_sign"] = scene.vertical_sign
    doc["chart"] = {"coords": list(scene.chart.coord_labels)}
    doc["h"] = _enc_algebra(scene.h)
    doc["connection"] = [_enc_lvf(c) for c in scene.connection.form.components]
    if scene.g is not None:
        doc["g"] = _enc_algebra(scene.g)
        action: dict[str, Any] = {"generators": [_enc_vf(v) for v in scene.action.generators]}
        action["epsilon"] = scene.action.epsilon
        doc["action"] = action
    if scene.g_connection is not None:
        doc["lifts"] = [{"vert": _enc_lvf(v)} for v in scene.g_connection.verts]
    if scene.phi0 is not None:
        doc["phi0"] = [_enc_lvf(v) for v in scene.phi0.values]
    if scene.max_degree is not None:
        doc["max_degree"] = scene.max_degree
    if scene.frame is not None:
        fol: dict[str, Any] = {"frame": [_enc_vf(v) for v in scene.frame]}
        if scene.samples is not None:
            fol["samples"] = [[_enc_scalar(c) for c in p] for p in scene.samples]
        if scene.deltas is not None:
            fol["deltas"] = [_enc_lvf(d) for d in scene.deltas]
        doc["foliation"] = fol
    if scene.flows:
        flows = []
        for f in scene.flows:
            item: dict[str, Any] = {
                "name": f.name, "field": _enc_vf(f.field), "frame": [_enc_vf(v) for v in f.frame],
                "start_points": [[_enc_scalar(c) for c in p] for p in f.start_points],
                "t_max": f.t_max, "steps": f.steps, "tolerance": f.tolerance,
                "checkpoints": f.checkpoints,
            }
            if f.flow_map is not None:
                item["flow_map"] = [_enc_poly(p) for p in f.flow_map]
            if f.lift_vert is not None:
                item["lift_vert"] = _enc_lvf(f.lift_vert)
            if f.t_values:
                item["t_values"] = [_enc_scalar(t) for t in f.t_values]
            flows.append(item)
        doc["flows"] = flows
    return doc


def serialize_scene(scene: Scene, indent: int | None = 1) -> str:
    """Canonical JSON text: sorted keys, canonical term order, trailing newline."""
    return json.dumps(scene_to_dict(scene), sort_keys=True, indent=indent) + "\n"
