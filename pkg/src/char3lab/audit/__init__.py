"""Identity-audit catalog, verdict plumbing, and the permanent pipeline."""

from .report import AuditReport, Verdict  # noqa: F401
from .catalog import CATALOG, check_identity, replay_witness  # noqa: F401
from .runner import audit_run, default_plan  # noqa: F401
from .pipeline import gen_star_fast, headline_experiment, permanent_via_paper  # noqa: F401
