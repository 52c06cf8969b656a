"""Deterministic fan-out of the identity catalog into an audit report."""

from __future__ import annotations

import time

from ..field import make_field
from .catalog import CATALOG, check_identity
from .report import AuditReport


def default_plan() -> list:
    """One trial of every catalog identity at its default dims."""
    return [(identity_id, {}, 1) for identity_id in sorted(CATALOG)]


def audit_run(plan=None, fields=None, seed="0") -> AuditReport:
    plan = plan if plan is not None else default_plan()
    fields = fields if fields is not None else [make_field(2), make_field(4)]
    seed = str(seed)
    start = time.monotonic()
    verdicts = []
    for spec in fields:
        for identity_id, dims, trials in plan:
            for trial in range(trials):
                verdicts.append(check_identity(
                    identity_id, dims=dims, spec=spec,
                    seed=f"{seed}:{spec.text()}:{trial}"))
    return AuditReport(seed=seed, fields=[f.text() for f in fields],
                       verdicts=verdicts,
                       runtime_seconds=time.monotonic() - start)
