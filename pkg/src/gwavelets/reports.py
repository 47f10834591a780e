"""Verdict containers returned by the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field

ACCEPT = "ACCEPT"
REJECT = "REJECT"
PASS = "PASS"
FAIL = "FAIL"


@dataclass
class Report:
    verdict: str
    certificate: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.verdict in (ACCEPT, PASS)

    def to_json(self):
        return {"verdict": self.verdict, "certificate": self.certificate, "details": self.details}


@dataclass
class Condition:
    """Verdict for one numbered condition, with the first counterexample."""

    verdict: str
    witness: dict | None = None
    note: str = ""

    @property
    def ok(self):
        return self.verdict == PASS

    def to_json(self):
        out = {"verdict": self.verdict, "witness": self.witness}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class ConditionReport:
    conditions: dict
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c.ok for c in self.conditions.values())

    @property
    def verdict(self):
        return PASS if self.ok else FAIL

    def failed(self):
        return [name for name, c in self.conditions.items() if not c.ok]

    def to_json(self):
        return {
            "verdict": self.verdict,
            "conditions": {k: c.to_json() for k, c in self.conditions.items()},
            "details": self.details,
        }
