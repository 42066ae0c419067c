"""Structured pass/fail reports with reproducible witnesses.

Every failed verdict carries the name of the single check that failed, the
offending generator, and the nonzero normal form that certifies the failure,
so any failure can be reproduced by re-running just that check.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Verdict:
    name: str
    passed: bool
    witness: str | None = None
    detail: str | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass
class CheckReport:
    title: str
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def add(self, name: str, passed: bool, witness: str | None = None, detail: str | None = None) -> None:
        self.verdicts.append(Verdict(name, passed, witness, detail))

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for v in other.verdicts:
            self.verdicts.append(Verdict(prefix + v.name, v.passed, v.witness, v.detail))

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    def first_failure(self) -> Verdict | None:
        fails = self.failures()
        return fails[0] if fails else None

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "verdicts": [v.as_dict() for v in self.verdicts],
        }

    def render(self) -> str:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.title}"]
        for v in self.verdicts:
            mark = "ok" if v.passed else "FAIL"
            line = f"  - {v.name}: {mark}"
            if not v.passed:
                if v.witness:
                    line += f"  witness: {v.witness}"
                if v.detail:
                    line += f"  normal form: {v.detail}"
            lines.append(line)
        return "\n".join(lines)


class CheckFailedError(RuntimeError):
    """A pipeline precondition or mechanical verification failed."""

    def __init__(self, report: CheckReport):
        failure = report.first_failure()
        msg = f"{report.title} failed"
        if failure is not None:
            msg += f": {failure.name}"
            if failure.witness:
                msg += f" (witness {failure.witness})"
        super().__init__(msg)
        self.report = report
