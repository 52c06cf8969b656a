"""Verdict and report records with a stable JSON schema.

A verdict's status is `pass` exactly when both independently evaluated
sides agree; `fail` carries a witness: the complete serialized instance,
sufficient to re-evaluate both sides without the original seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_PRECONDITION = "precondition_unmet"
STATUS_RESOURCE = "resource_exhausted"


@dataclass
class Verdict:
    identity_id: str
    status: str
    field_text: str
    dims: dict
    seed: str
    lhs: str | None = None
    rhs: str | None = None
    details: dict = field(default_factory=dict)
    witness: dict | None = None
    must_pass: bool = False

    def to_dict(self) -> dict:
        return {
            "identity_id": self.identity_id,
            "status": self.status,
            "field": self.field_text,
            "dims": self.dims,
            "seed": self.seed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "details": self.details,
            "witness": self.witness,
            "must_pass": self.must_pass,
        }

    @staticmethod
    def from_dict(d: dict) -> "Verdict":
        return Verdict(
            identity_id=d["identity_id"], status=d["status"],
            field_text=d["field"], dims=d["dims"], seed=d["seed"],
            lhs=d.get("lhs"), rhs=d.get("rhs"),
            details=d.get("details", {}), witness=d.get("witness"),
            must_pass=d.get("must_pass", False))


@dataclass
class AuditReport:
    seed: str
    fields: list
    verdicts: list  # of Verdict
    runtime_seconds: float = 0.0

    def tallies(self) -> dict:
        t = {STATUS_PASS: 0, STATUS_FAIL: 0, STATUS_PRECONDITION: 0, STATUS_RESOURCE: 0}
        for v in self.verdicts:
            t[v.status] = t.get(v.status, 0) + 1
        return t

    def must_pass_ok(self) -> bool:
        return all(v.status == STATUS_PASS for v in self.verdicts if v.must_pass)

    def first_failures(self) -> dict:
        out = {}
        for v in self.verdicts:
            if v.status == STATUS_FAIL and v.identity_id not in out:
                out[v.identity_id] = v.witness
        return out

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "fields": self.fields,
            "tallies": self.tallies(),
            "must_pass_ok": self.must_pass_ok(),
            "runtime_seconds": round(self.runtime_seconds, 3),
            "verdicts": [v.to_dict() for v in self.verdicts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "AuditReport":
        d = json.loads(text)
        rep = AuditReport(seed=d["seed"], fields=d["fields"],
                          verdicts=[Verdict.from_dict(v) for v in d["verdicts"]],
                          runtime_seconds=d.get("runtime_seconds", 0.0))
        return rep
