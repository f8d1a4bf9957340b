"""CLI entry point for the hybrid link model.

Usage::

    hybrid-link eval --config link.yaml
    hybrid-link check --config link.yaml
    hybrid-link fig3 --out ./out --plot
    hybrid-link fig7 --format json
    hybrid-link sweep --figure fig6 --grid-min 0.05 --grid-max 0.7 --grid-count 20 --series 0 50
    hybrid-link init-config --output link.yaml

Exit status: 0 ok, 1 ``check`` found a failing verdict, 2 usage or
configuration error, 3 infeasible or unconverged solve, 4 output failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import textwrap
import time
from pathlib import Path
from typing import TYPE_CHECKING

from pydantic import ValidationError

from hybrid_link.errors import (
    ConfigError,
    DomainError,
    HybridLinkError,
    InfeasibleError,
    OutputError,
    QuadratureError,
    RootFindingError,
)

if TYPE_CHECKING:
    from hybrid_link.config import RunConfig
    from hybrid_link.sweeps import SweepRequest

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

_FIGURES = ("fig3", "fig4", "fig5", "fig6", "fig7")

logger = logging.getLogger("hybrid_link.cli")


# ======================================================================
# Argument parsing
# ======================================================================


def _build_parser() -> argparse.ArgumentParser:
    epilog = textwrap.dedent("""\
        examples:
          hybrid-link eval
          hybrid-link eval --config link.yaml --format json
          hybrid-link check --config link.yaml
          hybrid-link fig3 --out ./out --plot
          hybrid-link fig4 --tol 1e-8
          hybrid-link sweep --figure fig5 --grid-min 0.05 --grid-max 0.78 --grid-count 30 --series 0 10
          hybrid-link init-config --output link.yaml
    """)

    parser = argparse.ArgumentParser(
        prog="hybrid-link",
        description="Fidelity and success probability of a heralded quantum-dot / trapped-ion entanglement link.",
        epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", type=str, default=None, help="Path to a flat YAML config file.")
    common.add_argument("--out", "-o", type=str, default="./out", help="Output directory (default: ./out).")
    common.add_argument(
        "--format",
        type=str,
        default="csv",
        choices=["csv", "json"],
        help="Table format; for eval/check, json switches the report to JSON (default: csv).",
    )
    common.add_argument("--plot", action="store_true", help="Also write an SVG plot next to each table.")
    common.add_argument("--tol", type=float, default=None, help="Relative quadrature tolerance (overrides rel_tol).")
    common.add_argument(
        "--log-level",
        type=str,
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: log_level from the config, INFO).",
    )

    subparsers = parser.add_subparsers(dest="command", title="commands")

    subparsers.add_parser("eval", parents=[common], help="Print the figures of merit for one configuration.")
    subparsers.add_parser(
        "check", parents=[common], help="Run the weak-excitation validity check (exit 1 on a failing verdict)."
    )

    figure_help = {
        "fig3": "Spectral fidelity vs pulse duration for each atomic detuning.",
        "fig4": "Pulse duration and pump intensity needed vs atomic detuning.",
        "fig5": "Recoil-limited fidelity vs collection angle for each nbar.",
        "fig6": "Success probability vs collection angle at the target fidelity.",
        "fig7": "Optimal success probability and collection angle vs nbar.",
    }
    for name in _FIGURES:
        subparsers.add_parser(name, parents=[common], help=figure_help[name])

    sweep_parser = subparsers.add_parser(
        "sweep",
        parents=[common],
        help="Run a figure sweep over a custom grid.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=textwrap.dedent("""\
            examples:
              hybrid-link sweep --figure fig3 --grid-min 0.1 --grid-max 50 --grid-count 40 --grid-scale log --series 1
              hybrid-link sweep --figure fig7 --grid-min 0 --grid-max 1000 --grid-count 51
        """),
    )
    sweep_parser.add_argument("--figure", required=True, choices=list(_FIGURES), help="Figure to sweep.")
    sweep_parser.add_argument("--grid-min", type=float, default=None, help="Axis start (default: the figure's).")
    sweep_parser.add_argument("--grid-max", type=float, default=None, help="Axis end (default: the figure's).")
    sweep_parser.add_argument("--grid-count", type=int, default=None, help="Number of grid points.")
    sweep_parser.add_argument("--grid-scale", choices=["linear", "log"], default=None, help="Axis spacing.")
    sweep_parser.add_argument(
        "--series", type=float, nargs="+", default=None, help="Series values (delta_a GHz for fig3, nbar for fig5/6)."
    )

    init_parser = subparsers.add_parser("init-config", help="Write the default configuration as flat YAML.")
    init_parser.add_argument(
        "--output", "-o", type=str, default=None, help="Write config to this file instead of stdout."
    )
    return parser


# ======================================================================
# Main entry point
# ======================================================================


def main(argv: list[str] | None = None) -> int:
    """Parse ``argv``, run the command and return the process exit status."""
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    try:
        return _dispatch(args)
    except ConfigError as exc:
        _fail(f"configuration error: {exc}")
        return EXIT_USAGE
    except DomainError as exc:
        _fail(f"invalid parameters: {exc}")
        return EXIT_USAGE
    except ImportError as exc:
        _fail(str(exc))
        return EXIT_USAGE
    except InfeasibleError as exc:
        _fail(f"infeasible: {exc}")
        if exc.diagnostic:
            print(json.dumps(exc.diagnostic, indent=2, default=str), file=sys.stderr)
        return EXIT_INFEASIBLE
    except (QuadratureError, RootFindingError) as exc:
        _fail(f"numerical failure: {exc}")
        return EXIT_INFEASIBLE
    except (OutputError, OSError) as exc:
        _fail(f"cannot write output: {exc}")
        return EXIT_IO
    except HybridLinkError as exc:
        _fail(str(exc))
        return EXIT_USAGE


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


def _fail(message: str) -> None:
    print(f"hybrid-link: error: {message}", file=sys.stderr)


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "init-config":
        return _cmd_init_config(args.output)

    cfg = _load_config(args)
    if args.command == "eval":
        return _cmd_eval(cfg, args)
    if args.command == "check":
        return _cmd_check(cfg, args)
    return _cmd_sweep(cfg, args)


def _load_config(args: argparse.Namespace) -> RunConfig:
    from hybrid_link.config import RunConfig, parse_config

    logging.basicConfig(
        level=getattr(logging, args.log_level or "INFO"),
        format="%(asctime)s %(name)-30s %(levelname)-7s %(message)s",
        datefmt="%H:%M:%S",
    )
    cfg = parse_config(args.config)
    if args.log_level is None:
        logging.getLogger().setLevel(getattr(logging, cfg.log_level, logging.INFO))

    if args.tol is not None:
        try:
            cfg = RunConfig.model_validate({**cfg.model_dump(), "rel_tol": args.tol})
        except ValidationError as exc:
            raise ConfigError(exc.errors()[0]["msg"], key="--tol") from exc
    return cfg


# ======================================================================
# Command implementations
# ======================================================================


def _cmd_eval(cfg: RunConfig, args: argparse.Namespace) -> int:
    from hybrid_link.sinks.console import ConsoleSink
    from hybrid_link.sweeps import evaluate_link

    report = evaluate_link(cfg.scenario(), cfg.constraints())
    ConsoleSink(fmt="json" if args.format == "json" else "text").write(report)
    return EXIT_OK


def _cmd_check(cfg: RunConfig, args: argparse.Namespace) -> int:
    from hybrid_link.sinks.console import ConsoleSink
    from hybrid_link.sweeps import link_validity

    report = link_validity(cfg.scenario())
    ConsoleSink(fmt="json" if args.format == "json" else "text").write(report)
    if report.failed:
        logger.warning("Weak-excitation check failed (atom=%s, qd=%s)", report.atom_verdict, report.qd_verdict)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _sweep_request(cfg: RunConfig, args: argparse.Namespace) -> SweepRequest:
    from hybrid_link.sweeps import DEFAULT_GRIDS, FigureId, GridSpec, SweepRequest

    figure = FigureId(args.figure if args.command == "sweep" else args.command)
    constraints = cfg.constraints()

    grid = DEFAULT_GRIDS[figure]
    if figure in (FigureId.FIG5, FigureId.FIG6) and grid.max > constraints.delta_max:
        grid = grid.model_copy(update={"max": constraints.delta_max})
    series: tuple[float, ...] = {
        FigureId.FIG3: cfg.fig3_delta_a_ghz,
        FigureId.FIG5: cfg.nbar_series,
        FigureId.FIG6: cfg.nbar_series,
    }.get(figure, ())

    if args.command == "sweep":
        overrides = {
            "min": args.grid_min,
            "max": args.grid_max,
            "count": args.grid_count,
            "scale": args.grid_scale,
        }
        data = {**grid.model_dump(), **{k: v for k, v in overrides.items() if v is not None}}
        if args.series is not None:
            series = tuple(args.series)
        try:
            grid = GridSpec.model_validate(data)
        except ValidationError as exc:
            raise ConfigError(exc.errors()[0]["msg"], key="--grid") from exc

    try:
        return SweepRequest(
            figure=figure,
            grid=grid,
            scenario=cfg.scenario(),
            constraints=constraints,
            series=series,
            workers=cfg.workers,
        )
    except ValidationError as exc:
        raise ConfigError(exc.errors()[0]["msg"], key="--grid" if args.command == "sweep" else None) from exc


def _cmd_sweep(cfg: RunConfig, args: argparse.Namespace) -> int:
    from hybrid_link import __version__
    from hybrid_link.manifest import RunManifest
    from hybrid_link.sinks import write_table
    from hybrid_link.sweeps import run_sweep

    started = time.perf_counter()
    request = _sweep_request(cfg, args)
    result = run_sweep(request)

    out = Path(args.out)
    stem = str(request.figure)
    written = [write_table(result, args.format, out / f"{stem}.{args.format}")]
    if args.plot:
        written.append(write_table(result, "svg", out / f"{stem}.svg"))

    manifest = RunManifest(
        tool_version=__version__,
        command=args.command,
        config=cfg.model_dump(mode="json"),
        tolerances={
            "rel_tol": cfg.rel_tol,
            "abs_tol": cfg.abs_tol,
            "max_subdivisions": cfg.max_subdivisions,
            "root_x_tol": cfg.root_x_tol,
        },
        wall_time_s={"sweep": result.wall_time_s, args.command: time.perf_counter() - started},
    )
    for path in written:
        manifest.add_output(path)
    manifest.write(out)

    if result.n_infeasible:
        print(f"{stem}: {result.n_infeasible} of {result.n_rows} points infeasible (see status column)", file=sys.stderr)
    return EXIT_OK


def _cmd_init_config(output: str | None) -> int:
    from hybrid_link.config import RunConfig, serialize_config

    text = serialize_config(RunConfig())
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OutputError(exc.strerror or str(exc), path=output) from exc
        print(f"Config written to {output}")
    else:
        print(text, end="")
    return EXIT_OK


if __name__ == "__main__":
    run()
