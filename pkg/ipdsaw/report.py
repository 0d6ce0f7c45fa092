"""CSV and JSON reports with run metadata."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .config import RunConfig
from .constants import SCHEMA_VERSION, TOOL_NAME, TOOL_VERSION
from .errors import RunConfigError
from .util import write_text_atomic


@dataclass
class Report:
    """A table of results plus the metadata every output carries."""

    config: RunConfig
    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)
    wall_clock: Optional[float] = None

    def add(self, *row: Any) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} values, expected {len(self.columns)}")
        self.rows.append(tuple(row))

    def metadata(self) -> dict[str, Any]:
        return {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "config": self.config.to_dict(),
            "seed": self.config.seed,
            "wall_clock_seconds": self.wall_clock,
        }


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    if value is None:
        return ""
    return str(value)


def format_csv(report: Report) -> str:
    meta = report.metadata()
    lines = [
        f"# tool={meta['tool']} version={meta['version']} schema_version={SCHEMA_VERSION}",
        "# config=" + json.dumps(meta["config"], sort_keys=True),
        f"# seed={meta['seed']}",
    ]
    for key in sorted(report.extra):
        lines.append(f"# {key}=" + json.dumps(report.extra[key], sort_keys=True))
    if report.wall_clock is not None:
        lines.append(f"# wall_clock={report.wall_clock:.3f}")
    lines.append(",".join(report.columns))
    lines.extend(",".join(_cell(v) for v in row) for row in report.rows)
    return "\n".join(lines) + "\n"


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def format_json(report: Report) -> str:
    doc = {"schema_version": SCHEMA_VERSION, **report.metadata()}
    doc.update(report.extra)
    doc["results"] = [{c: _jsonable(v) for c, v in zip(report.columns, row)} for row in report.rows]
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "csv":
        return format_csv(report)
    if fmt == "json":
        return format_json(report)
    raise RunConfigError(f"unknown report format {fmt!r}")


def emit(report: Report, fmt: str, output: Optional[str]) -> Optional[Path]:
    """Write atomically to `output`, or return None when there is no output path."""
    if output is None:
        return None
    path = Path(output)
    write_text_atomic(path, render(report, fmt))
    return path


def parse_csv(text: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """(metadata, header, rows) of a report written by format_csv."""
    meta: dict[str, str] = {}
    header: list[str] = []
    rows: list[list[str]] = []
    for line in text.splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            parts = body.split(" ") if body.startswith("tool=") else [body]
            for part in parts:
                if "=" in part:
                    key, value = part.split("=", 1)
                    meta[key] = value
            continue
        if not header:
            header = line.split(",")
        elif line:
            rows.append(line.split(","))
    return meta, header, rows


def parse_json(text: str) -> dict[str, Any]:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise RunConfigError(f"unsupported report schema {doc.get('schema_version')!r}")
    return doc

