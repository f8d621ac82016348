"""Conformance report assembly and JSON (de)serialization."""
from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import __version__
from .errors import IntegrityError
from .opcore import ResidualRecord

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ConformanceReport",
    "type": "object",
    "required": ["version", "timestamp", "params", "records", "findings", "summary"],
    "additionalProperties": False,
    "properties": {
        "version": {"type": "string"},
        "timestamp": {"type": "string"},
        "params": {"type": "object"},
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["relation_id", "residual", "norm_scale", "passed", "tolerance", "expected_pass"],
                "additionalProperties": False,
                "properties": {
                    "relation_id": {"type": "string"},
                    "residual": {"type": "number", "minimum": 0},
                    "norm_scale": {"type": "number", "minimum": 1},
                    "passed": {"type": "boolean"},
                    "tolerance": {"type": "number"},
                    "expected_pass": {"type": "boolean"},
                },
            },
        },
        "findings": {"type": "array", "items": {"type": "object", "required": ["kind"]}},
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed", "not_expected"],
            "properties": {k: {"type": "integer", "minimum": 0} for k in ("total", "passed", "failed", "not_expected")},
        },
    },
}


def summarize(records: Iterable[ResidualRecord]) -> dict[str, int]:
    """``passed``/``failed`` count expected-pass records only; records whose
    relation is not expected on the realization are tallied as ``not_expected``."""
    records = list(records)
    exp = [r for r in records if r.expected_pass]
    return {
        "total": len(records),
        "passed": sum(r.passed for r in exp),
        "failed": sum(not r.passed for r in exp),
        "not_expected": len(records) - len(exp),
    }


@dataclass(frozen=True)
class ConformanceReport:
    version: str
    timestamp: str
    params: dict
    records: list[ResidualRecord]
    findings: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "timestamp": self.timestamp,
            "params": self.params,
            "records": [r.to_dict() for r in self.records],
            "findings": self.findings,
            "summary": self.summary,
        }

    def to_json(self) -> str:
        # float repr is the shortest string that round-trips a double
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: Mapping) -> "ConformanceReport":
        return cls(
            d["version"], d["timestamp"], dict(d["params"]),
            [ResidualRecord.from_dict(r) for r in d["records"]],
            list(d["findings"]), dict(d["summary"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "ConformanceReport":
        return cls.from_dict(json.loads(text))


def assemble(
    records: Iterable[ResidualRecord],
    findings: Iterable[dict] = (),
    metadata: Mapping | None = None,
    timestamp: str | None = None,
) -> ConformanceReport:
    records = sorted(records, key=lambda r: r.relation_id)
    for a, b in zip(records, records[1:]):
        if a.relation_id == b.relation_id:
            raise IntegrityError(f"duplicate relation id {a.relation_id!r}")
    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return ConformanceReport(
        __version__, timestamp, dict(metadata or {}), records, list(findings), summarize(records)
    )
