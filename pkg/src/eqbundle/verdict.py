from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    Truthy exactly when the checked identity holds. On failure ``clause``
    names the failing condition, ``location`` says where (generator index,
    coordinate, sample point, ...), and ``defect`` carries the nonzero object
    that witnesses the failure. ``clauses`` records every sub-condition that
    was evaluated.
    """

    holds: bool
    clause: str | None = None
    location: dict[str, Any] = field(default_factory=dict)
    defect: Any = None
    clauses: dict[str, bool] = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    @classmethod
    def ok(cls, **clauses: bool) -> Verdict:
        return cls(True, clauses=clauses)

    def witness_text(self, labels=None) -> str | None:
        if self.holds or self.defect is None:
            return None
        d = self.defect
        if hasattr(d, "render"):
            try:
                return d.render(labels) if labels is not None else d.render()
            except TypeError:
                return d.render()
        return str(d)
