"""Machine-readable check reports, their JSON form, and a plain-text renderer."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from .errors import SceneError

__all__ = ["ReportEntry", "Report", "VERDICTS", "report_from_dict", "report_schema"]

VERDICTS = ("pass", "fail", "unsupported", "error")


@lru_cache(maxsize=1)
def report_schema() -> dict:
    text = resources.files("eqbundle").joinpath("data/report.schema.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class ReportEntry:
    check: str
    verdict: str
    anchor: str
    witness: str | None = None
    timing_ms: float = 0.0
    location: dict[str, Any] = field(default_factory=dict)
    detail: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if (self.verdict == "fail") != (self.witness is not None):
            raise ValueError("a witness is present exactly when the verdict is fail")

    def to_dict(self, timing: bool = True) -> dict:
        out = {"check": self.check, "verdict": self.verdict, "anchor": self.anchor,
               "witness": self.witness, "location": _jsonable(self.location),
               "detail": _jsonable(self.detail)}
        if timing:
            out["timing_ms"] = round(self.timing_ms, 3)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


@dataclass(frozen=True)
class Report:
    scene: str
    seed: int
    vertical_sign: int
    entries: tuple[ReportEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e.check)))

    def entry(self, check: str) -> ReportEntry:
        for e in self.entries:
            if e.check == check:
                return e
        raise KeyError(check)

    @property
    def all_pass(self) -> bool:
        return all(e.verdict == "pass" for e in self.entries)

    def summary(self) -> dict[str, int]:
        return {v: sum(e.verdict == v for e in self.entries) for v in VERDICTS}

    def _body(self, timing: bool) -> dict:
        return {"report_schema": 1, "scene": self.scene, "seed": self.seed,
                "vertical_sign": self.vertical_sign,
                "entries": [e.to_dict(timing) for e in self.entries],
                "summary": self.summary()}

    def digest(self) -> str:
        """SHA-256 of the canonical report with timing fields left out."""
        text = json.dumps(self._body(False), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        body = self._body(True)
        body["digest"] = self.digest()
        return body

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def render_text(self) -> str:
        lines = [f"scene {self.scene}  seed {self.seed}  vertical sign {self.vertical_sign:+d}"]
        for e in self.entries:
            lines.append(f"  {e.verdict.upper():<11} {e.check:<24} {e.timing_ms:9.1f} ms  [{e.anchor}]")
            if e.witness is not None:
                where = ", ".join(f"{k}={v}" for k, v in sorted(e.location.items()))
                lines.append(f"      witness: {e.witness}" + (f"  at {where}" if where else ""))
            reason = e.detail.get("reason")
            if reason:
                lines.append(f"      {reason}")
            if e.check == "solve-phi0" and "phi0" in e.detail:
                lines.append("      phi0: " + "; ".join(e.detail["phi0"])
                             + f"  (kernel dim {e.detail.get('kernel_dim', 0)})")
        counts = ", ".join(f"{n} {v}" for v, n in self.summary().items() if n)
        lines.append(f"  {counts}")
        lines.append(f"  digest {self.digest()}")
        return "\n".join(lines) + "\n"


def report_from_dict(doc: Any) -> Report:
    """Rebuild a report from its JSON form, validating it first."""
    validator = jsonschema.Draft202012Validator(report_schema())
    problems = sorted({("/" + "/".join(str(p) for p in err.absolute_path), err.message)
                       for err in validator.iter_errors(doc)})
    if problems:
        raise SceneError(problems)
    try:
        entries = [ReportEntry(check=e["check"], verdict=e["verdict"], anchor=e["anchor"],
                               witness=e["witness"], timing_ms=e.get("timing_ms", 0.0),
                               location=e["location"], detail=e["detail"])
                   for e in doc["entries"]]
    except ValueError as exc:
        raise SceneError([("/entries", str(exc))]) from None
    return Report(doc["scene"], doc["seed"], doc["vertical_sign"], tuple(entries))
