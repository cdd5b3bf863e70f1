"""Check reports: a human-readable text form and a versioned JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from cpoisson.verdict import FAIL, INDETERMINATE, PASS

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CheckEntry:
    name: str
    status: str
    witnesses: tuple[tuple[str, str], ...] = ()
    residuals: dict[str, float] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "witnesses": [{"location": loc, "expression": expr} for loc, expr in self.witnesses],
            "residuals": dict(sorted(self.residuals.items())),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckEntry":
        return cls(
            name=d["name"],
            status=d["status"],
            witnesses=tuple((w["location"], w["expression"]) for w in d.get("witnesses", [])),
            residuals={k: float(v) for k, v in d.get("residuals", {}).items()},
            notes=tuple(d.get("notes", [])),
        )


@dataclass(frozen=True)
class CheckReport:
    manifest: str
    entries: tuple[CheckEntry, ...]
    seed: int = 42
    samples: int = 20
    rtol: float = 1e-6

    @property
    def overall(self) -> str:
        statuses = {e.status for e in self.entries}
        if FAIL in statuses:
            return FAIL
        if INDETERMINATE in statuses:
            return INDETERMINATE
        return PASS

    @property
    def passed(self) -> bool:
        return self.overall == PASS

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def statuses(self) -> dict[str, str]:
        return {e.name: e.status for e in self.entries}


def emit_report(r: CheckReport, format: str = "text") -> bytes:
    if format == "text":
        return _text(r).encode()
    if format == "structured":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "manifest": r.manifest,
            "numeric": {"seed": r.seed, "samples": r.samples, "rtol": r.rtol},
            "checks": [e.to_dict() for e in r.entries],
            "overall": r.overall,
        }
        return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode()
    raise ValueError(f"unknown report format {format!r}")


def parse_report(data: bytes | str) -> CheckReport:
    doc = json.loads(data)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    num = doc.get("numeric", {})
    return CheckReport(
        manifest=doc["manifest"],
        entries=tuple(CheckEntry.from_dict(e) for e in doc["checks"]),
        seed=num.get("seed", 42),
        samples=num.get("samples", 20),
        rtol=num.get("rtol", 1e-6),
    )


def _text(r: CheckReport) -> str:
    lines = [f"manifest: {r.manifest}  (seed {r.seed}, {r.samples} samples, rtol {r.rtol:g})"]
    width = max((len(e.name) for e in r.entries), default=0)
    for e in r.entries:
        lines.append(f"{e.name.ljust(width)}  {e.status.upper():<13} {e.elapsed * 1000:8.1f} ms")
        for loc, expr in e.witnesses:
            lines.append(f"    witness {loc}: {expr}")
        for k, v in sorted(e.residuals.items()):
            lines.append(f"    {k}: {v:.3g}")
        for note in e.notes:
            lines.append(f"    note: {note}")
    lines.append(f"OVERALL: {r.overall.upper()}")
    return "\n".join(lines) + "\n"
