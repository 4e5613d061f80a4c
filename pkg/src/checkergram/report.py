"""Machine-readable verification reports.

A report is a flat list of named check records.  The report passes iff every
record passes.  Rational residuals serialize as exact "p/q" strings so the
JSON representation round-trips without loss.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .linalg import RATIONAL


def format_residual(value, mode):
    if value is None:
        return None
    if mode == RATIONAL:
        return str(value)
    return float(value)


@dataclass
class CheckRecord:
    name: str
    indices: tuple = ()
    passed: bool = True
    residual: object = None
    detail: str = ""

    def to_dict(self):
        return {
            "name": self.name,
            "indices": list(self.indices),
            "passed": self.passed,
            "residual": self.residual,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            name=d["name"],
            indices=tuple(d.get("indices", ())),
            passed=bool(d["passed"]),
            residual=d.get("residual"),
            detail=d.get("detail", ""),
        )


@dataclass
class Report:
    command: str
    records: list = field(default_factory=list)
    elapsed: float = 0.0
    matrices: dict = None

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    def add(self, name, indices=(), passed=True, residual=None, detail=""):
        self.records.append(CheckRecord(name, tuple(indices), passed, residual, detail))

    def check(self, name, residual, mode, tolerance, indices=(), detail=""):
        """Record a residual check: exact zero in rational mode, < tolerance in float mode."""
        if mode == RATIONAL:
            ok = residual == 0
        else:
            ok = residual < tolerance
        self.add(name, indices, ok, format_residual(residual, mode), detail)
        return ok

    def extend(self, other):
        self.records.extend(other.records)

    def failures(self):
        return [r for r in self.records if not r.passed]

    def to_dict(self):
        out = {
            "command": self.command,
            "passed": self.passed,
            "elapsed": self.elapsed,
            "records": [r.to_dict() for r in self.records],
        }
        if self.matrices is not None:
            out["matrices"] = self.matrices
        return out

    @classmethod
    def from_dict(cls, d):
        rep = cls(
            command=d["command"],
            records=[CheckRecord.from_dict(r) for r in d.get("records", [])],
            elapsed=d.get("elapsed", 0.0),
            matrices=d.get("matrices"),
        )
        return rep

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))
