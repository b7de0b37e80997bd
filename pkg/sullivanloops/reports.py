"""Verification reports shared by every check suite."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Violation:
    """A single failed instance of a check."""

    subject: str
    detail: str


@dataclass
class CheckReport:
    """Outcome of one verification suite."""

    name: str
    checked_degree: int
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def first_witness(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def record(self, subject: str, detail: str) -> None:
        self.violations.append(Violation(subject, detail))

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        text = f"{self.name}: {status} ({self.checked} checked up to degree {self.checked_degree})"
        if self.first_witness is not None:
            text += f"; first witness {self.first_witness.subject}: {self.first_witness.detail}"
        return text

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked_degree": self.checked_degree,
            "checked": self.checked,
            "violations": [
                {"subject": v.subject, "detail": v.detail} for v in self.violations
            ],
            "notes": list(self.notes),
        }
