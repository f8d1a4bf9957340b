"""Table sink abstraction.

Provides:
- ``TableSink`` - abstract base class every output format implements.
  Subclasses render a :class:`~hybrid_link.sweeps.SweepResult` to bytes;
  the base class owns the file write so that every format fails the same
  way and produces byte-stable files.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import ClassVar

from hybrid_link.errors import OutputError
from hybrid_link.sweeps import SweepResult

__all__ = ["TableSink"]

logger = logging.getLogger("hybrid_link.sinks")


class TableSink(ABC):
    """Abstract base class for all table sinks.

    Parameters:
        path: Output file.  Parent directories are created on write.
    """

    extension: ClassVar[str]

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)

    @abstractmethod
    def render(self, result: SweepResult) -> bytes:
        """Serialise ``result``; identical results must give identical bytes."""

    def write(self, result: SweepResult) -> Path:
        """Render ``result`` and write it to :attr:`path`.

        Raises:
            OutputError: If the directory or file cannot be written.
        """
        payload = self.render(result)
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_bytes(payload)
        except OSError as exc:
            raise OutputError(exc.strerror or str(exc), path=str(self.path)) from exc
        logger.info("Wrote %s (%d rows, %d bytes)", self.path, result.n_rows, len(payload))
        return self.path
