"""Delimited output: CSV with a JSON config header, or a JSON row array."""

from __future__ import annotations

import csv
import json
import math
from typing import IO, Sequence


def format_value(value) -> str:
    """17 significant digits, scientific, lowercase e; blanks for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return f"{float(value):.16e}"
    if hasattr(value, "item"):  # numpy scalars
        return format_value(value.item())
    return str(value)


def _json_value(value):
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def config_header(config: dict) -> str:
    return "# " + json.dumps(config, sort_keys=True, separators=(",", ":"))


def write_csv(stream: IO[str], columns: Sequence[str], rows: Sequence[dict], config: dict) -> None:
    stream.write(config_header(config) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(col)) for col in columns])


def write_json(stream: IO[str], columns: Sequence[str], rows: Sequence[dict]) -> None:
    payload = [{col: _json_value(row.get(col)) for col in columns} for row in rows]
    json.dump(payload, stream, indent=1)
    stream.write("\n")


def write_rows(stream: IO[str], fmt: str, columns: Sequence[str], rows: Sequence[dict], config: dict) -> None:
    if fmt == "csv":
        write_csv(stream, columns, rows, config)
    elif fmt == "json":
        write_json(stream, columns, rows)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
