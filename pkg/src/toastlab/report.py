"""Verification reports: a list of named pass/fail checks with witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    witness: dict[str, Any] | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, witness: dict | None = None) -> Check:
        check = Check(name, bool(passed), witness)
        self.checks.append(check)
        return check

    def __getitem__(self, name: str) -> Check:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def passed(self, *names: str) -> bool:
        """True when every named check (all checks if none given) passed."""
        if not names:
            return all(c.passed for c in self.checks)
        return all(self[name].passed for name in names)

    @property
    def ok(self) -> bool:
        return self.passed()

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        out: dict[str, Any] = {"checks": [c.to_json() for c in self.checks]}
        if self.info:
            out["info"] = self.info
        return out

    def summary(self) -> str:
        return ", ".join(f"{c.name}={'pass' if c.passed else 'FAIL'}" for c in self.checks)
