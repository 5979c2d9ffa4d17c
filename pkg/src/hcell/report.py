"""Validation reports: named checks with pass/fail/skipped status and witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Check:
    name: str
    status: str
    witness: Any = None
    detail: str = ""

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ValidationReport:
    """Ordered list of checks plus free-form result data.

    ``failures`` is empty exactly when every recorded check passed.
    """

    subject: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    def record(self, name: str, passed: bool, witness: Any = None, detail: str = "") -> bool:
        self.checks.append(Check(name, PASS if passed else FAIL, None if passed else witness, detail))
        return passed

    def require(self, name: str, witness: Any, detail: str = "") -> bool:
        """Pass exactly when no witness of failure was found."""
        return self.record(name, witness is None, witness, detail)

    def fail(self, name: str, witness: Any = None, detail: str = "") -> None:
        self.checks.append(Check(name, FAIL, witness, detail))

    def skip(self, name: str, detail: str = "") -> None:
        self.checks.append(Check(name, SKIPPED, None, detail))

    def merge(self, other: "ValidationReport", prefix: str | None = None) -> "ValidationReport":
        tag = other.subject if prefix is None else prefix
        for c in other.checks:
            name = f"{tag}/{c.name}" if tag else c.name
            self.checks.append(Check(name, c.status, c.witness, c.detail))
        return self

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def messages(self) -> list[str]:
        return [f"{c.name}: {c.detail}" if c.detail else c.name for c in self.failures]

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "status": PASS if self.ok else FAIL,
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
        }

    def render_text(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{c.status}] {c.name}"
            if c.detail:
                line += f" ({c.detail})"
            if c.witness is not None:
                line += f" witness={c.witness}"
            lines.append(line)
        for key in sorted(self.data):
            lines.append(f"  {key}: {self.data[key]}")
        return "\n".join(lines)


def report_from_dict(data: dict) -> ValidationReport:
    """Inverse of ``ValidationReport.to_dict`` for JSON-decoded reports."""
    rep = ValidationReport(data["subject"], data=dict(data.get("data", {})))
    for c in data.get("checks", []):
        rep.checks.append(Check(c["name"], c["status"], c.get("witness"), c.get("detail", "")))
    return rep
