"""Dispatch of named checks over a scene, producing a :class:`Report`."""

from __future__ import annotations

import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .calculus import current_vertical_sign, vertical_sign
from .connections import (
    contraction_criterion,
    curvature,
    curvature_closed_form,
    g_curvature,
    is_adapted,
    is_strongly_adapted,
    solve_phi0,
    theorem1_check,
    tilde_eta,
)
from .errors import EqBundleError
from .flows import lemma1_consistent, prop1_agrees_with_adapted
from .foliations import check_involutive, partial_curvature_flat, strongly_adapted_to_D
from .lie import LieValuedFunction
from .report import Report, ReportEntry
from .scene import Scene
from .verdict import Verdict

__all__ = ["CHECKS", "ANCHORS", "run_checks", "applicable_checks"]

DEFAULT_MAX_DEGREE = 2

ANCHORS = {
    "curvature": "K(eta)(v, w) = [eta(v), eta(w)] - eta([v, w])",
    "g-curvature": "K(h)(s, t) = [h(s), h(t)] - h([s, t])",
    "adapted": "adapted: [J h(v), eta(TX)] lies in eta(TX)",
    "strongly-adapted": "strongly adapted: adapted and image(J h) in image(eta)",
    "tilde-eta": "eta strongly adapted to eta~(v) = eta(a(v))",
    "contraction-criterion": "i_{a(v)} K(eta) = 0 for all v in g",
    "theorem1-check": "phi~(phi0) = -Pi, with h(v) = eta(a(v)) + phi0(v)",
    "solve-phi0": "existence of phi0 with phi~(phi0) = -Pi",
    "foliation-involutive": "[F, F] lies in F",
    "partial-flat": "partial connection flat: [D s, D t] = D [s, t]",
    "strongly-adapted-to-D": "eta restricted to F equals D and i_s K(eta) = 0 for s in F",
    "lemma1-flow": "flow of xi preserves D iff [xi, D] lies in D",
    "prop1-polyflow": "flow of (xi, psi) preserves eta: Phi_t^* A - A + dP_t = 0",
}

CHECKS = tuple(sorted(ANCHORS))

# scene sections each check needs, in the order they are reported as missing
_NEEDS = {
    "curvature": (),
    "g-curvature": ("lifts",),
    "adapted": ("lifts",),
    "strongly-adapted": ("lifts",),
    "tilde-eta": ("action",),
    "contraction-criterion": ("action",),
    "theorem1-check": ("action", "phi0"),
    "solve-phi0": ("action",),
    "foliation-involutive": ("foliation",),
    "partial-flat": ("foliation", "foliation.deltas"),
    "strongly-adapted-to-D": ("foliation", "foliation.deltas"),
    "lemma1-flow": ("flows",),
    "prop1-polyflow": ("flows",),
}


@dataclass
class _Context:
    scene: Scene
    seed: int
    max_degree: int


@dataclass
class _Outcome:
    verdict: str
    witness: str | None = None
    location: dict | None = None
    detail: dict | None = None


class _Unsupported(Exception):
    pass


def _has(scene: Scene, section: str) -> bool:
    return {
        "lifts": scene.g_connection is not None,
        "action": scene.action is not None,
        "phi0": scene.phi0 is not None,
        "foliation": scene.frame is not None,
        "foliation.deltas": scene.deltas is not None,
        "flows": bool(scene.flows),
    }[section]


def applicable_checks(scene: Scene) -> list[str]:
    """Checks whose required scene sections are all present."""
    out = []
    for name in CHECKS:
        if not all(_has(scene, s) for s in _NEEDS[name]):
            continue
        if name == "prop1-polyflow" and not any(f.flow_map is not None for f in scene.flows):
            continue
        out.append(name)
    return out


def _labels(ctx: _Context):
    return ctx.scene.chart.coord_labels


def _from_verdict(v: Verdict, ctx: _Context, **detail) -> _Outcome:
    if v.clauses:
        detail["clauses"] = dict(v.clauses)
    if v:
        return _Outcome("pass", detail=detail)
    if v.clause:
        detail["clause"] = v.clause
    return _Outcome("fail", v.witness_text(_labels(ctx)) or v.clause or "fails",
                    dict(v.location), detail)


def _check_curvature(ctx: _Context) -> _Outcome:
    eta = ctx.scene.connection
    k = curvature(eta)
    if k != curvature_closed_form(eta):
        return _Outcome("error", detail={"reason": "bracket and closed-form curvature disagree"})
    if k.is_zero():
        return _Outcome("pass", detail={"curvature": "0"})
    return _Outcome("fail", k.render(), {}, {"curvature": k.render()})


def _check_g_curvature(ctx: _Context) -> _Outcome:
    kh = g_curvature(ctx.scene.g_connection)
    for (i, j), val in sorted(kh.values.items()):
        if not val.is_zero():
            return _Outcome("fail", val.render(_labels(ctx)), {"pair": [i, j]},
                            {"epsilon": ctx.scene.action.epsilon})
    return _Outcome("pass", detail={"epsilon": ctx.scene.action.epsilon})


def _check_adapted(ctx: _Context) -> _Outcome:
    return _from_verdict(is_adapted(ctx.scene.connection, ctx.scene.g_connection), ctx)


def _check_strongly_adapted(ctx: _Context) -> _Outcome:
    return _from_verdict(is_strongly_adapted(ctx.scene.connection, ctx.scene.g_connection), ctx)


def _check_tilde_eta(ctx: _Context) -> _Outcome:
    eta, action = ctx.scene.connection, ctx.scene.action
    strong = is_strongly_adapted(eta, tilde_eta(eta, action))
    contraction = contraction_criterion(eta, action)
    if strong.holds != contraction.holds:
        return _Outcome("error", detail={
            "reason": "strong adaptedness to eta~ disagrees with the contraction criterion",
            "strongly_adapted": strong.holds, "contraction": contraction.holds})
    return _from_verdict(strong, ctx, contraction=contraction.holds)


def _check_contraction(ctx: _Context) -> _Outcome:
    return _from_verdict(contraction_criterion(ctx.scene.connection, ctx.scene.action), ctx)


def _check_theorem1(ctx: _Context) -> _Outcome:
    res = theorem1_check(ctx.scene.phi0, ctx.scene.connection, ctx.scene.action)
    detail = {}
    if res:
        labels = _labels(ctx)
        detail["g_connection"] = [lift.vert.render(labels) for lift in res.g_connection.lifts]
    return _from_verdict(res, ctx, **detail)


def _check_solve_phi0(ctx: _Context) -> _Outcome:
    sol = solve_phi0(ctx.scene.connection, ctx.scene.action, ctx.max_degree)
    if sol is None:
        return _Outcome("fail", f"no solution with polynomial degree <= {ctx.max_degree}", {},
                        {"max_degree": ctx.max_degree, "status": "none_up_to_degree"})
    labels = _labels(ctx)
    return _Outcome("pass", detail={
        "max_degree": ctx.max_degree,
        "phi0": [v.render(labels) for v in sol.phi0.values],
        "kernel_dim": len(sol.kernel),
        "kernel": [[v.render(labels) for v in k.values] for k in sol.kernel],
    })


def _check_involutive(ctx: _Context) -> _Outcome:
    return _from_verdict(check_involutive(ctx.scene.foliation(ctx.seed)), ctx)


def _check_partial_flat(ctx: _Context) -> _Outcome:
    return _from_verdict(partial_curvature_flat(ctx.scene.partial_connection(ctx.seed)), ctx)


def _check_sa_to_d(ctx: _Context) -> _Outcome:
    return _from_verdict(strongly_adapted_to_D(ctx.scene.connection,
                                               ctx.scene.partial_connection(ctx.seed)), ctx)


def _merge(results: list[tuple[str, _Outcome]]) -> _Outcome:
    """Combine per-flow outcomes: any error wins, then any failure."""
    detail = {name: o.detail for name, o in results}
    for kind in ("error", "fail"):
        for name, o in results:
            if o.verdict == kind:
                loc = {"flow": name, **(o.location or {})}
                reason = (o.detail or {}).get("reason")
                d = {"flows": detail, **({"reason": f"{name}: {reason}"} if reason else {})}
                return _Outcome(kind, o.witness, loc, d)
    return _Outcome("pass", detail={"flows": detail})


def _check_lemma1(ctx: _Context) -> _Outcome:
    results = []
    for spec in ctx.scene.flows:
        try:
            out = lemma1_consistent(spec.problem())
        except EqBundleError as exc:
            results.append((spec.name, _Outcome("error", detail={"reason": str(exc)})))
            continue
        argmax = out.transport.argmax()
        detail = {"bracket_condition": out.bracket.holds,
                  "max_deviation": float(f"{out.transport.max_deviation:.6e}"),
                  "tolerance": spec.tolerance,
                  "at": {"start": argmax[0], "t": argmax[1]} if argmax else None}
        if not out.consistent:
            detail["reason"] = "bracket condition and numeric transport disagree"
            results.append((spec.name, _Outcome("error", detail=detail)))
        elif out.preserved:
            results.append((spec.name, _Outcome("pass", detail=detail)))
        else:
            witness = (f"[xi, s] = {out.bracket.defect.render()} leaves the distribution; "
                       f"transport deviation {detail['max_deviation']:g}")
            results.append((spec.name, _Outcome("fail", witness, dict(out.bracket.location), detail)))
    return _merge(results)


def _check_prop1(ctx: _Context) -> _Outcome:
    scene = ctx.scene
    if not scene.h.is_abelian():
        raise _Unsupported("closed-form flow check needs an abelian structure algebra")
    specs = [f for f in scene.flows if f.flow_map is not None]
    if not specs:
        raise _Unsupported("no flow problem has a closed-form flow_map")
    results = []
    n = scene.chart.dim
    for spec in specs:
        psi = spec.lift_vert or LieValuedFunction.zero(scene.h, n)
        t_values = spec.t_values or (1,)
        try:
            flow_v, adapted_v = prop1_agrees_with_adapted(scene.connection, spec.field,
                                                          spec.flow_map, psi, t_values)
        except EqBundleError as exc:
            results.append((spec.name, _Outcome("error", detail={"reason": str(exc)})))
            continue
        detail = {"preserved": flow_v.holds, "adapted": adapted_v.holds}
        if flow_v.holds != adapted_v.holds:
            detail["reason"] = "closed-form flow check disagrees with infinitesimal adaptedness"
            results.append((spec.name, _Outcome("error", detail=detail)))
        elif flow_v:
            results.append((spec.name, _Outcome("pass", detail=detail)))
        else:
            results.append((spec.name, _Outcome("fail", flow_v.witness_text(), dict(flow_v.location), detail)))
    return _merge(results)


_IMPL: dict[str, Callable[[_Context], _Outcome]] = {
    "curvature": _check_curvature,
    "g-curvature": _check_g_curvature,
    "adapted": _check_adapted,
    "strongly-adapted": _check_strongly_adapted,
    "tilde-eta": _check_tilde_eta,
    "contraction-criterion": _check_contraction,
    "theorem1-check": _check_theorem1,
    "solve-phi0": _check_solve_phi0,
    "foliation-involutive": _check_involutive,
    "partial-flat": _check_partial_flat,
    "strongly-adapted-to-D": _check_sa_to_d,
    "lemma1-flow": _check_lemma1,
    "prop1-polyflow": _check_prop1,
}


def _run_one(name: str, ctx: _Context) -> ReportEntry:
    start = time.perf_counter()
    missing = [s for s in _NEEDS[name] if not _has(ctx.scene, s)]
    if missing:
        out = _Outcome("unsupported", detail={"reason": f"scene has no {missing[0]} section",
                                              "missing": missing[0]})
    else:
        try:
            out = _IMPL[name](ctx)
        except _Unsupported as exc:
            out = _Outcome("unsupported", detail={"reason": str(exc)})
        except (EqBundleError, ValueError, ArithmeticError, AssertionError) as exc:
            out = _Outcome("error", detail={"reason": f"{type(exc).__name__}: {exc}"})
    elapsed = (time.perf_counter() - start) * 1000.0
    return ReportEntry(check=name, verdict=out.verdict, anchor=ANCHORS[name], witness=out.witness,
                       timing_ms=elapsed, location=out.location or {}, detail=out.detail or {})


def run_checks(scene: Scene, check_list: Sequence[str] | None = None, seed: int | None = None,
               max_degree: int | None = None, sign: int | None = None) -> Report:
    """Run the named checks (default: every applicable one) and collect a report.

    ``seed`` overrides the scene seed for sampled checks; ``sign`` overrides
    the scene's vertical bracket sign. Errors inside a check become ``error``
    entries; unknown check names raise ``ValueError``.
    """
    names = list(check_list) if check_list is not None else applicable_checks(scene)
    unknown = sorted(set(names) - set(CHECKS))
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    ctx = _Context(scene, seed if seed is not None else scene.default_seed(),
                   max_degree if max_degree is not None else (
                       scene.max_degree if scene.max_degree is not None else DEFAULT_MAX_DEGREE))
    if sign is None:
        sign = scene.vertical_sign if scene.vertical_sign is not None else current_vertical_sign()
    with vertical_sign(sign):
        entries = [_run_one(name, ctx) for name in sorted(set(names))]
    return Report(scene.name, ctx.seed, sign, tuple(entries))
