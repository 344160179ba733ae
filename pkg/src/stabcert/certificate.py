"""Audit certificates: a full machine-checkable record of a verified run.

All exact values are serialized as strings ("p/q", "r*sqrt(s)"), never as
binary floats; approximate fields carry an explicit digits annotation.  A
certificate containing any failed check has overall status "failed";
discrepancy entries (computed value differing from a published one) never
fail a run but are always surfaced.  Files are UTF-8 JSON, schema_version "1",
written atomically (write-then-rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class CertCheck:
    name: str
    kind: str  # exact | sampled | approximate
    status: str  # pass | fail | discrepancy
    margin: str | None = None
    residual: str | None = None
    detail: str = ""

    def to_jsonable(self) -> dict:
        d: dict = {"name": self.name, "kind": self.kind, "status": self.status}
        if self.margin is not None:
            d["margin"] = self.margin
        if self.residual is not None:
            d["residual"] = self.residual
        if self.detail:
            d["detail"] = self.detail
        return d

    @staticmethod
    def from_jsonable(d: dict) -> "CertCheck":
        return CertCheck(
            name=d["name"],
            kind=d["kind"],
            status=d["status"],
            margin=d.get("margin"),
            residual=d.get("residual"),
            detail=d.get("detail", ""),
        )


@dataclass(frozen=True)
class PublishedTarget:
    quantity: str
    quoted: str
    computed: str
    match: bool

    def to_jsonable(self) -> dict:
        return {"quantity": self.quantity, "quoted": self.quoted, "computed": self.computed, "match": self.match}

    @staticmethod
    def from_jsonable(d: dict) -> "PublishedTarget":
        return PublishedTarget(d["quantity"], d["quoted"], d["computed"], d["match"])


@dataclass
class Certificate:
    n: int
    params: dict[str, str] = field(default_factory=dict)
    checks: list[CertCheck] = field(default_factory=list)
    published_targets: list[PublishedTarget] = field(default_factory=list)
    values: dict = field(default_factory=dict)
    flags: list[dict] = field(default_factory=list)
    environment: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def add_check(self, check: CertCheck) -> None:
        self.checks.append(check)

    def add_target(self, target: PublishedTarget) -> None:
        self.published_targets.append(target)

    def add_flag(self, name: str, detail: str, **extra) -> None:
        self.flags.append({"name": name, "detail": detail, **extra})

    @property
    def overall_status(self) -> str:
        return "failed" if any(c.status == "fail" for c in self.checks) else "passed"

    @property
    def discrepancies(self) -> list[str]:
        out = [c.name for c in self.checks if c.status == "discrepancy"]
        out += [t.quantity for t in self.published_targets if not t.match]
        return out

    def to_jsonable(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "n": self.n,
            "overall_status": self.overall_status,
            "params": self.params,
            "checks": [c.to_jsonable() for c in self.checks],
            "published_targets": [t.to_jsonable() for t in self.published_targets],
            "values": self.values,
            "flags": self.flags,
            "environment": self.environment,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), indent=2, sort_keys=False)

    @staticmethod
    def from_jsonable(d: dict) -> "Certificate":
        cert = Certificate(
            n=d["n"],
            params=dict(d.get("params", {})),
            checks=[CertCheck.from_jsonable(c) for c in d.get("checks", [])],
            published_targets=[PublishedTarget.from_jsonable(t) for t in d.get("published_targets", [])],
            values=dict(d.get("values", {})),
            flags=list(d.get("flags", [])),
            environment=dict(d.get("environment", {})),
            schema_version=d.get("schema_version", SCHEMA_VERSION),
        )
        return cert

    @staticmethod
    def from_json(s: str) -> "Certificate":
        return Certificate.from_jsonable(json.loads(s))

    def write(self, path: str | Path) -> None:
        """Atomic write: serialize to a temp file in the target directory, then rename."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(self.to_json())
                fh.write("\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @staticmethod
    def read(path: str | Path) -> "Certificate":
        with open(path, encoding="utf-8") as fh:
            return Certificate.from_json(fh.read())
