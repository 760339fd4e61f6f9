"""Machine-readable pass/fail records produced by every check."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Report:
    check_id: str
    statement: str
    status: str = PASS
    metrics: dict = field(default_factory=dict)
    reason: str | None = None
    seed: int | None = None
    counterexample: Any = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def fail(self, reason: str, counterexample: Any = None) -> Report:
        # keep the first failure; it is the one worth replaying
        if self.status != FAIL:
            self.status = FAIL
            self.reason = reason
            self.counterexample = counterexample
        return self

    def expect(self, condition: bool, reason: str, counterexample: Any = None) -> bool:
        if not condition:
            self.fail(reason, counterexample)
        return condition

    def to_dict(self) -> dict:
        out = {
            "check_id": self.check_id,
            "statement": self.statement,
            "status": self.status,
            "metrics": _plain(self.metrics),
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.seed is not None:
            out["seed"] = self.seed
        if self.counterexample is not None:
            out["counterexample"] = _plain(self.counterexample)
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def summary(self) -> str:
        parts = [f"[{self.status.upper()}] {self.check_id}: {self.statement}"]
        if self.metrics:
            shown = ", ".join(
                f"{k}={v}" for k, v in sorted(_plain(self.metrics).items())
                if not isinstance(v, (dict, list))
            )
            if shown:
                parts.append(f"  {shown}")
        if self.reason:
            parts.append(f"  reason: {self.reason}")
        for note in self.notes:
            parts.append(f"  note: {note}")
        return "\n".join(parts)


def skipped(check_id: str, statement: str, reason: str) -> Report:
    return Report(check_id, statement, status=SKIPPED, reason=reason)


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    return repr(value)
