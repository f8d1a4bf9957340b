"""Plot sink - static SVG figures.

Requires the ``plot`` extra::

    pip install hybrid-link-model[plot]

Figures are drawn on a standalone :class:`matplotlib.figure.Figure` (no
pyplot state) with a fixed SVG hash salt and no date stamp, so repeated
runs produce identical files.
"""

from __future__ import annotations

import io
import logging
from typing import Any, NamedTuple

from hybrid_link.sinks.base import TableSink
from hybrid_link.sweeps import FigureId, SweepResult

__all__ = ["PlotSink"]

logger = logging.getLogger("hybrid_link.sinks.plot")


class _Layout(NamedTuple):
    x: str
    y: str
    group: str | None
    xlog: bool
    ylog: bool
    xlabel: str
    ylabel: str
    title: str


_LAYOUTS: dict[FigureId, _Layout] = {
    FigureId.FIG3: _Layout(
        "tau_ns", "fidelity", "delta_a_ghz", True, False,
        "pulse duration τ (ns)", "fidelity", "Entanglement fidelity vs pulse duration",
    ),
    FigureId.FIG4: _Layout(
        "delta_a_ghz", "tau_ns", None, True, True,
        "atomic detuning δ_a/2π (GHz)", "τ for target fidelity (ns)", "Required pulse duration and pump intensity",
    ),
    FigureId.FIG5: _Layout(
        "delta_rad", "fidelity", "nbar", False, False,
        "collection angle Δ (rad)", "fidelity", "Recoil-limited fidelity vs collection angle",
    ),
    FigureId.FIG6: _Layout(
        "delta_rad", "probability", "nbar", False, False,
        "collection angle Δ (rad)", "success probability", "Success probability at fixed fidelity",
    ),
    FigureId.FIG7: _Layout(
        "nbar", "probability", None, False, False,
        "mean phonon number n̄", "optimal success probability", "Optimal success probability vs n̄",
    ),
}  # fmt: skip


def _series(result: SweepResult, layout: _Layout) -> list[tuple[str | None, list[float], list[float]]]:
    xs, ys = result.columns[layout.x], result.columns[layout.y]
    if layout.group is None:
        return [(None, list(xs), list(ys))]
    groups: dict[Any, tuple[list[float], list[float]]] = {}
    for g, x, y in zip(result.columns[layout.group], xs, ys, strict=True):
        groups.setdefault(g, ([], []))
        groups[g][0].append(x)
        groups[g][1].append(y)
    return [(f"{layout.group} = {g:g}", gx, gy) for g, (gx, gy) in groups.items()]


class PlotSink(TableSink):
    """Render a sweep result as an SVG line plot."""

    extension = "svg"

    def render(self, result: SweepResult) -> bytes:
        try:
            import matplotlib
            from matplotlib.figure import Figure
        except ImportError as err:
            raise ImportError(
                "matplotlib is required for --plot output.  Install with: pip install hybrid-link-model[plot]"
            ) from err

        layout = _LAYOUTS[result.figure]
        with matplotlib.rc_context({"svg.hashsalt": "hybrid-link", "svg.fonttype": "path"}):
            fig = Figure(figsize=(6.4, 4.4))
            ax = fig.add_subplot()
            for label, xs, ys in _series(result, layout):
                ax.plot(xs, ys, marker=".", linewidth=1.2, label=label)
            if layout.xlog:
                ax.set_xscale("log")
            if layout.ylog:
                ax.set_yscale("log")
            ax.set_xlabel(layout.xlabel)
            ax.set_ylabel(layout.ylabel)
            ax.set_title(layout.title)
            ax.grid(True, which="major", alpha=0.3)

            if result.figure is FigureId.FIG4:
                twin = ax.twinx()
                twin.plot(
                    result.columns["delta_a_ghz"], result.columns["intensity_w_per_cm2"], linestyle="--", color="tab:red"
                )
                twin.set_yscale("log")
                twin.set_ylabel("pump intensity (W/cm²)")
            elif layout.group is not None:
                ax.legend(loc="best", fontsize="small")

            fig.tight_layout()
            buf = io.BytesIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
        logger.debug("Rendered %s plot (%d bytes)", result.figure, buf.tell())
        return buf.getvalue()
