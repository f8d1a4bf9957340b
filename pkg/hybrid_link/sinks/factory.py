"""Sink factory - creates table sinks from an output format name.

Used by the CLI to turn ``--format csv|json`` (and ``--plot``) into sink
instances::

    sink = create_sink("csv", path="out/fig3.csv")
    sink.write(result)
"""

from __future__ import annotations

import importlib
import logging
from pathlib import Path
from typing import cast

from hybrid_link.sinks.base import TableSink

__all__ = ["available_formats", "create_sink", "register_sink"]

logger = logging.getLogger("hybrid_link.sinks.factory")

# Registry of format names → (module_path, class_name)
_SINK_REGISTRY: dict[str, tuple[str, str]] = {
    "csv": ("hybrid_link.sinks.file", "CsvSink"),
    "json": ("hybrid_link.sinks.file", "JsonSink"),
    "svg": ("hybrid_link.sinks.plot", "PlotSink"),
}


def available_formats() -> list[str]:
    return sorted(_SINK_REGISTRY)


def create_sink(fmt: str, path: str | Path) -> TableSink:
    """Create the sink registered for ``fmt``, writing to ``path``.

    The sink module is imported on demand, so formats with optional
    dependencies cost nothing until used.
    """
    fmt = fmt.lower().strip()
    if fmt not in _SINK_REGISTRY:
        raise ValueError(f"Unknown output format '{fmt}'.  Available: {available_formats()}")

    module_path, class_name = _SINK_REGISTRY[fmt]
    module = importlib.import_module(module_path)
    cls = getattr(module, class_name)

    logger.debug("Creating %s for %s", class_name, path)
    return cast(TableSink, cls(path))


def register_sink(name: str, module_path: str, class_name: str) -> None:
    """Register a custom table format.

    Example::

        from hybrid_link.sinks.factory import register_sink
        register_sink("parquet", "mypackage.sinks", "ParquetSink")
    """
    _SINK_REGISTRY[name.lower().strip()] = (module_path, class_name)
