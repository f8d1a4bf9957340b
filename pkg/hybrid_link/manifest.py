"""Run manifest: what was run, with which inputs, and what it produced.

The manifest is the only output that carries volatile facts (wall time);
it lists a SHA-256 digest for every table and plot file it accompanies.
It is written last, and only when every output was written.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field

from hybrid_link.errors import OutputError

__all__ = ["MANIFEST_NAME", "RunManifest", "file_digest"]

logger = logging.getLogger("hybrid_link.manifest")

MANIFEST_NAME = "manifest.json"


def file_digest(path: Path) -> str:
    """Hex SHA-256 of a file's contents."""
    return hashlib.sha256(path.read_bytes()).hexdigest()


class RunManifest(BaseModel):
    """Resolved inputs, tool version, tolerances, timings and output digests."""

    tool_version: str
    command: str
    config: dict[str, Any]
    tolerances: dict[str, float]
    wall_time_s: dict[str, float] = Field(default_factory=dict)
    outputs: dict[str, str] = Field(default_factory=dict)

    def add_output(self, path: Path) -> None:
        self.outputs[path.name] = file_digest(path)

    def write(self, directory: str | Path) -> Path:
        """Write ``manifest.json`` into ``directory``."""
        target = Path(directory) / MANIFEST_NAME
        text = json.dumps(self.model_dump(mode="json"), indent=2) + "\n"
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OutputError(exc.strerror or str(exc), path=str(target)) from exc
        logger.info("Wrote %s (%d outputs)", target, len(self.outputs))
        return target
