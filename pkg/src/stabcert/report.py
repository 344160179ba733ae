"""Constraint reports and flagged approximate values shared by the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .rational import rational_to_str


@dataclass(frozen=True)
class ApproxValue:
    """A floating quantity carried for reporting only, never for pass/fail.

    ``value`` is a decimal string at ``digits`` significant digits, produced
    from an internal computation at ``internal_dps`` digits.
    """

    value: str
    digits: int = 12
    internal_dps: int = 50

    @staticmethod
    def from_mpf(x: mpmath.mpf, digits: int = 12, internal_dps: int = 50) -> "ApproxValue":
        return ApproxValue(mpmath.nstr(x, digits), digits, internal_dps)

    def to_jsonable(self) -> dict:
        return {"value": self.value, "digits": self.digits, "internal_dps": self.internal_dps}

    @staticmethod
    def from_jsonable(d: dict) -> "ApproxValue":
        return ApproxValue(d["value"], d["digits"], d["internal_dps"])


@dataclass(frozen=True)
class ConstraintEntry:
    """One named constraint with its exact margin (or sampled/approximate result)."""

    name: str
    satisfied: bool
    kind: str = "exact"  # exact | sampled | approximate | info
    margin: Fraction | None = None
    requirement: str = "> 0"
    detail: str = ""

    def to_jsonable(self) -> dict:
        d: dict = {
            "name": self.name,
            "satisfied": self.satisfied,
            "kind": self.kind,
            "requirement": self.requirement,
        }
        if self.margin is not None:
            d["margin"] = rational_to_str(self.margin)
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class ConstraintReport:
    """Ordered list of constraint margins with pass/fail per constraint."""

    entries: list[ConstraintEntry] = field(default_factory=list)

    def add(
        self,
        name: str,
        satisfied: bool,
        *,
        kind: str = "exact",
        margin: Fraction | None = None,
        requirement: str = "> 0",
        detail: str = "",
    ) -> ConstraintEntry:
        entry = ConstraintEntry(name, satisfied, kind, margin, requirement, detail)
        self.entries.append(entry)
        return entry

    def extend(self, other: "ConstraintReport") -> None:
        self.entries.extend(other.entries)

    @property
    def all_satisfied(self) -> bool:
        return all(e.satisfied for e in self.entries if e.kind != "info")

    def failures(self) -> list[ConstraintEntry]:
        return [e for e in self.entries if not e.satisfied and e.kind != "info"]

    def entry(self, name: str) -> ConstraintEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_jsonable(self) -> list[dict]:
        return [e.to_jsonable() for e in self.entries]
