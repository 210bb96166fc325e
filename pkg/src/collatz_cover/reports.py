"""Machine-readable outcomes for theorem, conjecture, and range audits.

A report fails exactly when it carries counterexamples; checks that were
skipped for a stated reason (valuation deeper than the table, budget
exhaustion) land in ``deferred`` and, absent failures, make the outcome
"deferred" rather than "fail".

Serialized JSON omits timing by default so identical runs produce identical
bytes; pass ``include_elapsed=True`` to embed ``elapsed_ms``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, NamedTuple

OUTCOME_PASS = "pass"
OUTCOME_FAIL = "fail"
OUTCOME_DEFERRED = "deferred"


class Counterexample(NamedTuple):
    input: Any
    expected: Any
    actual: Any


class Deferred(NamedTuple):
    input: Any
    reason: str


@dataclass(frozen=True)
class VerifyReport:
    check_name: str
    parameters: dict[str, Any]
    outcome: str
    counterexamples: tuple[Counterexample, ...]
    deferred: tuple[Deferred, ...]
    items_checked: int
    elapsed_s: float
    details: dict[str, Any] = field(default_factory=dict)


def build_report(check_name: str, parameters: dict[str, Any], *,
                 counterexamples=(), deferred=(), items_checked: int = 0,
                 elapsed_s: float = 0.0, details=None) -> VerifyReport:
    """Assemble a report; the outcome is derived, never passed in."""
    counterexamples = tuple(counterexamples)
    deferred = tuple(deferred)
    if counterexamples:
        outcome = OUTCOME_FAIL
    elif deferred:
        outcome = OUTCOME_DEFERRED
    else:
        outcome = OUTCOME_PASS
    return VerifyReport(check_name, dict(parameters), outcome, counterexamples,
                        deferred, items_checked, elapsed_s, dict(details or {}))


def report_to_json(report: VerifyReport, include_elapsed: bool = False) -> str:
    """Canonical JSON rendering; byte-identical for identical content."""
    obj: dict[str, Any] = {
        "check_name": report.check_name,
        "params": report.parameters,
        "outcome": report.outcome,
        "counterexamples": [
            {"input": c.input, "expected": c.expected, "actual": c.actual}
            for c in report.counterexamples
        ],
        "deferred": [{"input": d.input, "reason": d.reason} for d in report.deferred],
        "items_checked": report.items_checked,
        "details": report.details,
    }
    if include_elapsed:
        obj["elapsed_ms"] = report.elapsed_s * 1000.0
    return json.dumps(obj, indent=2) + "\n"


def report_to_text(report: VerifyReport, max_listed: int = 10) -> str:
    """Human-readable summary, deterministic (no timing on this surface)."""
    lines = [
        f"check: {report.check_name}",
        "params: " + " ".join(f"{k}={v}" for k, v in report.parameters.items()),
        f"outcome: {report.outcome}",
        f"items_checked: {report.items_checked}",
        f"counterexamples: {len(report.counterexamples)}",
    ]
    for c in report.counterexamples[:max_listed]:
        lines.append(f"  counterexample {c.input}: expected {c.expected}, got {c.actual}")
    if len(report.counterexamples) > max_listed:
        lines.append(f"  (+{len(report.counterexamples) - max_listed} more)")
    lines.append(f"deferred: {len(report.deferred)}")
    for d in report.deferred[:max_listed]:
        lines.append(f"  deferred {d.input}: {d.reason}")
    if len(report.deferred) > max_listed:
        lines.append(f"  (+{len(report.deferred) - max_listed} more)")
    for key in report.details:
        lines.append(f"{key}: {report.details[key]}")
    return "\n".join(lines) + "\n"
