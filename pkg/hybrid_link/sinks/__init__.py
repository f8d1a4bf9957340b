"""Output sinks for sweep tables, plots and reports.

Import any sink you need directly from this package::

    from hybrid_link.sinks import CsvSink, ConsoleSink, write_table
"""

from __future__ import annotations

import importlib
from pathlib import Path
from typing import Any

from hybrid_link.sinks.base import TableSink
from hybrid_link.sinks.console import ConsoleSink
from hybrid_link.sinks.factory import create_sink
from hybrid_link.sinks.file import CsvSink, JsonSink
from hybrid_link.sweeps import SweepResult

# PlotSink needs the ``plot`` extra and is loaded lazily:
#   from hybrid_link.sinks.plot import PlotSink

__all__ = [
    "ConsoleSink",
    "CsvSink",
    "JsonSink",
    "TableSink",
    "write_table",
]


def write_table(result: SweepResult, fmt: str, path: str | Path) -> Path:
    """Write ``result`` to ``path`` in format ``fmt`` (``csv``, ``json`` or ``svg``).

    Raises:
        OutputError: On any I/O failure; the message names the path.
    """
    return create_sink(fmt, path).write(result)


def __getattr__(name: str) -> Any:
    """Lazy-import sinks that require optional dependencies."""
    if name == "PlotSink":
        return importlib.import_module("hybrid_link.sinks.plot").PlotSink
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
