# majorana/utilities/output.py

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isfinite
from typing import Any, Dict, List, Sequence

from majorana.utilities.errors import DomainError

CSV: str = "csv"
JSON: str = "json"
FORMATS: Sequence[str] = (CSV, JSON)
FLOAT_FORMAT: str = ".12g"


@dataclass
class Report:
    """Tabular command result plus the metadata written alongside it."""

    command: str
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)


def format_float(value: float) -> str:
    if not isfinite(value):
        return "nan" if value != value else ("inf" if value > 0 else "-inf")
    return format(value, FLOAT_FORMAT)


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def render_cell(value: Any) -> str:
    """Text form of one value: 12 significant digits for floats, num/den for rationals."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return float(format(value, FLOAT_FORMAT)) if isfinite(value) else format_float(value)
    if isinstance(value, dict):
        return {key: _json_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(item) for item in value]
    return str(value)


def _metadata_lines(metadata: Dict[str, Any], prefix: str = "") -> List[str]:
    lines = []
    for key, value in metadata.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            lines.extend(_metadata_lines(value, prefix=f"{name}."))
        elif isinstance(value, (list, tuple)):
            lines.extend(f"# {name}: {render_cell(item)}" for item in value)
        else:
            lines.append(f"# {name}: {render_cell(value)}")
    return lines


def render_csv(report: Report) -> str:
    """Metadata as `# key: value` lines, then the header and rows."""
    buffer = io.StringIO()
    for line in _metadata_lines(report.metadata):
        buffer.write(line + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([render_cell(value) for value in row])
    return buffer.getvalue()


def render_json(report: Report) -> str:
    payload = {
        "command": report.command,
        "metadata": _json_value(report.metadata),
        "columns": report.columns,
        "rows": [
            {column: _json_value(value) for column, value in zip(report.columns, row)}
            for row in report.rows
        ],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def render(report: Report, output_format: str) -> str:
    if output_format == CSV:
        return render_csv(report)
    if output_format == JSON:
        return render_json(report)
    raise DomainError(f"unknown output format {output_format}; choose from {', '.join(FORMATS)}")
