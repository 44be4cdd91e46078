"""Check records, suite reports, and deterministic serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

Status = Literal["pass", "fail", "diagnostic"]

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["suite", "config", "checks", "overall"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "config": {"type": "object"},
        "overall": {"enum": ["pass", "fail"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "value", "threshold"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "diagnostic"]},
                    "value": {},
                    "threshold": {"type": ["number", "null"]},
                    "detail": {"type": "string"},
                },
            },
        },
    },
}


@dataclass
class CheckRecord:
    name: str
    status: Status
    value: Any
    threshold: float | None
    runtime: float = 0.0
    detail: str = ""

    def as_record(self) -> dict:
        out = {"name": self.name, "status": self.status, "value": self.value,
               "threshold": self.threshold}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    suite: str
    config: dict
    checks: list[CheckRecord] = field(default_factory=list)

    def add(self, record: CheckRecord) -> CheckRecord:
        if any(c.name == record.name for c in self.checks):
            raise ValueError(f"duplicate check name {record.name!r}")
        self.checks.append(record)
        return record

    def threshold_check(self, name: str, value: float, threshold: float, runtime: float = 0.0,
                        detail: str = "") -> CheckRecord:
        """Pass iff ``value <= threshold``; non-finite values fail."""
        ok = math.isfinite(value) and value <= threshold
        return self.add(CheckRecord(name, "pass" if ok else "fail", value, threshold, runtime, detail))

    def diagnostic(self, name: str, value: Any, runtime: float = 0.0, detail: str = "") -> CheckRecord:
        return self.add(CheckRecord(name, "diagnostic", value, None, runtime, detail))

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def as_record(self) -> dict:
        return {"suite": self.suite, "config": self.config,
                "checks": [c.as_record() for c in self.checks],
                "overall": "pass" if self.passed else "fail"}

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            thr = "" if c.threshold is None else f" (<= {format_number(c.threshold)})"
            lines.append(f"[{c.status:>10}] {c.name}: {_plain(c.value)}{thr}  [{c.runtime:.3f} s]")
        lines.append(f"{self.suite}: {'PASS' if self.passed else 'FAIL'}")
        return lines


def format_number(x: float) -> str:
    """17 significant digits, lowercase scientific notation."""
    if not math.isfinite(x):
        return {math.inf: "inf", -math.inf: "-inf"}.get(x, "nan")
    return f"{x:.16e}"


def _plain(value) -> str:
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, complex):
        return f"{format_number(value.real)}{'+' if value.imag >= 0 else '-'}{format_number(abs(value.imag))}j"
    return str(value)


def to_jsonable(value):
    """Convert numpy scalars, complex numbers and tuples into JSON-ready objects."""
    if hasattr(value, "item") and not isinstance(value, (list, dict)):
        value = value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dumps(value, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats in fixed 17-digit scientific form; keys keep insertion order."""
    value = to_jsonable(value)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return json.dumps(format_number(value))
        return format_number(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write_report(report: Report, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{report.suite}_report.json"
    path.write_text(dumps(report.as_record()) + "\n")
    return path


def write_rows(rows: list[dict], columns: list[str], path: str | Path, fmt: str = "csv") -> Path:
    """Write rows as CSV or JSON lines, floats in 17-digit scientific form."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_number(row[c]) if isinstance(row[c], float) else row[c]
                             for c in columns])
        path.write_text(buf.getvalue())
    else:
        lines = [dumps({c: row[c] for c in columns}, indent=0).replace("\n", "") for row in rows]
        path.write_text("".join(line + "\n" for line in lines))
    return path
