"""Shared verdict values returned by the checking operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Status(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Verdict:
    status: Status
    failures: tuple[str, ...] = ()
    details: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.status is Status.PASS

    @classmethod
    def from_failures(cls, failures, **details) -> "Verdict":
        failures = tuple(failures)
        status = Status.FAIL if failures else Status.PASS
        return cls(status, failures, details)


@dataclass(frozen=True)
class CheckLine:
    """One machine-readable result line: CHECK <name> <STATUS> key=value ..."""

    name: str
    status: Status
    details: tuple[tuple[str, object], ...] = ()

    def render(self) -> str:
        parts = ["CHECK", self.name, self.status.value]
        parts += [f"{key}={str(value).replace(' ', '_')}" for key, value in self.details]
        return " ".join(parts)

    @classmethod
    def of(cls, name: str, status: Status, **details) -> "CheckLine":
        return cls(name, status, tuple(details.items()))

    @classmethod
    def parse(cls, line: str) -> "CheckLine":
        head, name, status, *rest = line.split()
        if head != "CHECK":
            raise ValueError(f"not a check line: {line!r}")
        details = tuple(tuple(item.split("=", 1)) for item in rest)
        return cls(name, Status(status), details)
