"""File sinks - CSV and JSON tables.

CSV is the canonical figure format: a header row of column names, one row
per grid point, numbers as decimal text with 12 significant digits.  JSON
holds the same columns plus the input echo under ``metadata``; NaN is
written as ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

from hybrid_link.sinks.base import TableSink
from hybrid_link.sweeps import SweepResult

__all__ = ["CsvSink", "JsonSink", "format_cell"]


def format_cell(value: Any) -> str:
    """Text form of one CSV cell."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_json_safe(v) for v in value]
    return value


class CsvSink(TableSink):
    """Write a sweep result as an RFC-4180 CSV table."""

    extension = "csv"

    def render(self, result: SweepResult) -> bytes:
        buf = io.StringIO(newline="")
        writer = csv.writer(buf)
        writer.writerow(list(result.columns))
        for values in zip(*result.columns.values(), strict=True):
            writer.writerow([format_cell(v) for v in values])
        return buf.getvalue().encode("utf-8")


class JsonSink(TableSink):
    """Write a sweep result as ``{"columns": ..., "metadata": ...}``."""

    extension = "json"

    def render(self, result: SweepResult) -> bytes:
        document = {"columns": _json_safe(result.columns), "metadata": _json_safe(result.metadata)}
        return (json.dumps(document, indent=2, allow_nan=False) + "\n").encode("utf-8")
