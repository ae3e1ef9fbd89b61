"""Lightweight pass/fail records shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Optional


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    expected: str = ""
    actual: str = ""
    detail: str = ""


@dataclass
class Report:
    """An ordered collection of checks; truthy exactly when every check passed."""

    title: str
    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, name: str, passed: bool, expected="", actual="", detail: str = "") -> Check:
        check = Check(name, bool(passed), str(expected), str(actual), detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.expected, c.actual, c.detail))
        self.notes.extend(other.notes)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def get(self, name: str) -> Optional[Check]:
        try:
            return self[name]
        except KeyError:
            return None

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            mark = "ok " if c.passed else "BAD"
            line = f"  [{mark}] {c.name}"
            if not c.passed:
                line += f" expected {c.expected}, got {c.actual}"
            lines.append(line)
        return "\n".join(lines)
