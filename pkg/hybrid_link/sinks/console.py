"""Console sink - prints single-scenario reports to stdout.

Used by ``eval`` and ``check``; tables go through the file sinks instead.
"""

from __future__ import annotations

import json
import sys
from typing import IO

from pydantic import BaseModel

from hybrid_link.fidelity import ValidityReport
from hybrid_link.sweeps import LinkReport

__all__ = ["ConsoleSink"]

_LABELS: dict[str, str] = {
    "cooperativity": "cooperativity C",
    "eta": "Lamb-Dicke eta",
    "lamb_dicke": "Lamb-Dicke regime",
    "collection_efficiency": "collection efficiency",
    "n_s": "scattered photons N_s",
    "mean_sq_beta": "collected photons <|beta|^2>",
    "spectral_fidelity": "F spectral",
    "recoil_fidelity": "F recoil",
    "multiphoton_fidelity": "F multi-photon",
    "success_probability": "success probability P",
    "rate_per_s": "entanglement rate (1/s)",
    "atom_ratio": "atom weak-excitation ratio",
    "qd_ratio": "QD weak-excitation ratio",
}


class ConsoleSink:
    """Writes reports to the console (stdout by default).

    Parameters:
        fmt: ``"text"`` (aligned ``label: value`` lines) or ``"json"``.
        stream: Writable file-like object (defaults to ``sys.stdout``).
    """

    def __init__(self, *, fmt: str = "text", stream: IO[str] | None = None) -> None:
        self._fmt = fmt
        self._stream = stream or sys.stdout

    def write(self, report: LinkReport | ValidityReport) -> None:
        if self._fmt == "json":
            self._stream.write(json.dumps(report.model_dump(mode="json"), indent=2) + "\n")
        else:
            self._stream.write("".join(self._lines(report)))
        self._stream.flush()

    def _lines(self, report: BaseModel) -> list[str]:
        lines: list[str] = []
        for name, value in report:
            if isinstance(value, ValidityReport):
                lines.extend(self._lines(value))
                continue
            label = _LABELS.get(name, name.replace("_", " "))
            if isinstance(value, float):
                text = f"{value:.6g}"
            elif isinstance(value, bool):
                text = "yes" if value else "no"
            else:
                text = str(value)
            lines.append(f"{label:<32s} {text}\n")
        return lines
