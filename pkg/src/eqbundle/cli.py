"""Command-line interface.

Exit status: 0 when every requested check passes, 1 when some check does not
pass, 2 on unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import CHECKS, run_checks
from .errors import EqBundleError, SceneError
from .report import Report, report_from_dict
from .scene import parse_scene

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _sign(text: str) -> int:
    if text not in ("1", "+1", "-1"):
        raise argparse.ArgumentTypeError("vertical sign must be +1 or -1")
    return int(text)


def _check_list(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqbundle", description="Exact checks on connection scenes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("scene", type=Path, help="scene JSON file")
        p.add_argument("--seed", type=_u64, help="override the scene seed for sampled checks")
        p.add_argument("--vertical-sign", type=_sign, help="sign of the vertical bracket term (+1 or -1)")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--output", type=Path, help="also write the JSON report to this file")

    p = sub.add_parser("check", help="run checks on a scene")
    common(p)
    p.add_argument("--only", type=_check_list, help="comma-separated checks (default: all applicable)")
    p.add_argument("--max-degree", type=int, help="degree bound for solve-phi0")

    p = sub.add_parser("solve-phi0", help="search for phi0 up to a polynomial degree")
    common(p)
    p.add_argument("--max-degree", type=int, required=True)

    p = sub.add_parser("flow", help="run the flow checks for one named flow problem")
    common(p)
    p.add_argument("--problem", required=True, help="flow problem name")

    p = sub.add_parser("validate", help="parse and validate a scene")
    p.add_argument("scene", type=Path)

    p = sub.add_parser("report", help="render a saved JSON report")
    p.add_argument("report", type=Path)
    p.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def _print_scene_error(exc: SceneError, source: Path) -> None:
    for path, msg in exc.problems:
        print(f"{source}: {path}: {msg}", file=sys.stderr)


def _emit(report: Report, args) -> int:
    if args.output is not None:
        args.output.write_text(report.to_json(), encoding="utf-8")
    sys.stdout.write(report.to_json() if args.format == "json" else report.render_text())
    return EXIT_OK if report.all_pass else EXIT_FAIL


def _cmd_validate(args) -> int:
    scene = parse_scene(args.scene)
    parts = [f"chart dim {scene.chart.dim}", f"h = {scene.h.name} (dim {scene.h.dim})"]
    if scene.g is not None:
        parts.append(f"g = {scene.g.name} (dim {scene.g.dim}, epsilon {scene.action.epsilon:+d})")
    if scene.frame is not None:
        parts.append(f"foliation rank {len(scene.frame)}")
    if scene.flows:
        parts.append(f"{len(scene.flows)} flow problem(s)")
    print(f"ok: {scene.name}: " + ", ".join(parts))
    return EXIT_OK


def _cmd_report(args) -> int:
    try:
        doc = json.loads(args.report.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SceneError([("/", f"cannot read report: {exc}")]) from None
    report = report_from_dict(doc)
    sys.stdout.write(report.to_json() if args.format == "json" else report.render_text())
    return EXIT_OK if report.all_pass else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    source = getattr(args, "scene", None) or getattr(args, "report", None)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "report":
            return _cmd_report(args)
        scene = parse_scene(args.scene)
        opts = {"seed": args.seed, "sign": args.vertical_sign}
        if args.command == "check":
            report = run_checks(scene, args.only, max_degree=args.max_degree, **opts)
        elif args.command == "solve-phi0":
            if args.max_degree < 0:
                print("--max-degree must be nonnegative", file=sys.stderr)
                return EXIT_INPUT
            report = run_checks(scene, ["solve-phi0"], max_degree=args.max_degree, **opts)
        else:
            try:
                spec = scene.flow(args.problem)
            except KeyError:
                names = ", ".join(f.name for f in scene.flows) or "none"
                print(f"{args.scene}: no flow problem named {args.problem!r} (available: {names})",
                      file=sys.stderr)
                return EXIT_INPUT
            from dataclasses import replace
            single = replace(scene, flows=(spec,))
            checks = ["lemma1-flow"] + (["prop1-polyflow"] if spec.flow_map is not None else [])
            report = run_checks(single, checks, **opts)
        return _emit(report, args)
    except SceneError as exc:
        _print_scene_error(exc, source)
        return EXIT_INPUT
    except EqBundleError as exc:
        print(f"{source}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
