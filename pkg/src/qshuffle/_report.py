"""Shared shape of JSON verification reports."""
from __future__ import annotations

import json


def make_report(kind: str, checks: list[dict], **meta) -> dict:
    failures = sum(1 for c in checks if not c["pass"])
    return {"schema": 1, "kind": kind, **meta, "checked": len(checks),
            "failures": failures, "checks": checks}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1)
