"""Structured experiment reports.

A report carries the experiment kind, the embedding identifier, a full
echo of the effective configuration, and a flat list of numeric results.
Curve points (sweeps, per-component probes) set ``x``; scalar results
leave it unset.  JSON output is canonical (sorted keys) so identical runs
produce byte-identical files; the only volatile field is the timestamp,
which is isolated inside ``provenance``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional, Union


@dataclass(frozen=True)
class ResultEntry:
    key: str
    value: float
    x: Optional[float] = None


@dataclass
class EvalReport:
    kind: str
    embedding: str
    config: dict
    results: list[ResultEntry]
    provenance: dict = field(default_factory=dict)

    def value(self, key: str, x: Optional[float] = None) -> float:
        for entry in self.results:
            if entry.key == key and entry.x == x:
                return entry.value
        raise KeyError(f"no result for key={key!r}, x={x!r}")

    def curve(self, key: str) -> list[tuple[float, float]]:
        return [(e.x, e.value) for e in self.results if e.key == key and e.x is not None]


def new_provenance(inputs: Optional[dict] = None) -> dict:
    return {
        "created_at": datetime.now(timezone.utc).isoformat(),
        "inputs": dict(inputs or {}),
    }


def emit_report(report: EvalReport, fmt: str = "json") -> bytes:
    """Serialize a report; ``json`` is canonical, ``csv`` is plot-ready."""
    if fmt == "json":
        payload = {
            "kind": report.kind,
            "embedding": report.embedding,
            "config": report.config,
            "results": [
                {"key": e.key, "x": e.x, "value": e.value} for e in report.results
            ],
            "provenance": report.provenance,
        }
        return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["key", "x", "value"])
        for e in report.results:
            writer.writerow([e.key, "" if e.x is None else e.x, repr(e.value)])
        return out.getvalue().encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


def load_report(data: Union[bytes, str]) -> EvalReport:
    """Inverse of the JSON emitter."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    payload = json.loads(data)
    return EvalReport(
        kind=payload["kind"],
        embedding=payload["embedding"],
        config=payload["config"],
        results=[
            ResultEntry(key=r["key"], value=r["value"], x=r["x"])
            for r in payload["results"]
        ],
        provenance=payload["provenance"],
    )
