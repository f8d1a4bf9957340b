"""Inverse solves and the parameter sweeps behind the five figure tables.

A :class:`SweepRequest` names a figure, a 1-D grid and the fixed
:class:`LinkScenario`; :func:`run_sweep` evaluates every grid point (in a
worker pool when asked to) and assembles the named columns in grid order.
Points whose inverse solve has no solution are kept as flagged rows.
"""

from __future__ import annotations

import asyncio
import logging
import math
import threading
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from enum import StrEnum
from typing import Any

import numpy as np
from pydantic import BaseModel, Field, model_validator

from hybrid_link.constants import NS_PER_S, angular_to_ghz, ghz_to_angular
from hybrid_link.errors import DomainError, InfeasibleError
from hybrid_link.fidelity import (
    RecoilScenario,
    SpectralScenario,
    ValidityReport,
    collection_efficiency,
    entanglement_rate,
    lamb_dicke_regime,
    multiphoton_fidelity,
    n_s_for_fidelity,
    recoil_fidelity,
    spectral_fidelity,
    success_probability,
    thermal_beta_moments,
    weak_excitation_check,
)
from hybrid_link.models import (
    MAX_COLLECTION_ANGLE,
    AtomParams,
    CavityQDParams,
    CollectionGeometry,
    PulseSpec,
    TrapState,
)
from hybrid_link.numerics import MaximizeResult, QuadratureSpec, RootSpec, find_root, maximize_1d
from hybrid_link.optics import (
    atomic_cross_section,
    cooperativity,
    lorentzian,
    modified_lifetime,
    photon_energy,
)

__all__ = [
    "DEFAULT_GRIDS",
    "DEFAULT_SERIES",
    "STATUS_INFEASIBLE",
    "STATUS_OK",
    "FigureId",
    "GridScale",
    "GridSpec",
    "LinkReport",
    "LinkScenario",
    "SweepConstraints",
    "SweepRequest",
    "SweepResult",
    "evaluate_link",
    "intensity_for_scatter",
    "link_validity",
    "optimal_collection_angle",
    "pulse_duration_for_fidelity",
    "run_sweep",
]

logger = logging.getLogger("hybrid_link.sweeps")

STATUS_OK = "ok"
STATUS_INFEASIBLE = "infeasible"

# log10(τ / ns) scan used to bracket the fidelity crossing: 1 ps .. 1 μs.
_TAU_SCAN_LOG10 = tuple(float(x) for x in np.linspace(-3.0, 3.0, 13))

# Smallest collection angle searched, as a fraction of delta_max.
_MIN_ANGLE_FRACTION = 1e-6

Row = dict[str, Any]


# -----------------------------------------------------------------------
# Request and result records
# -----------------------------------------------------------------------


class FigureId(StrEnum):
    FIG3 = "fig3"
    FIG4 = "fig4"
    FIG5 = "fig5"
    FIG6 = "fig6"
    FIG7 = "fig7"


class GridScale(StrEnum):
    LINEAR = "linear"
    LOG = "log"


class GridSpec(BaseModel):
    """One sweep axis: ``count`` points between ``min`` and ``max`` inclusive."""

    model_config = {"frozen": True}

    min: float
    max: float
    count: int = Field(ge=2)
    scale: GridScale = GridScale.LINEAR

    @model_validator(mode="after")
    def _valid_axis(self) -> GridSpec:
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ValueError("grid bounds must be finite")
        if not self.min < self.max:
            raise ValueError(f"grid requires min < max, got [{self.min}, {self.max}]")
        if self.scale is GridScale.LOG and self.min <= 0.0:
            raise ValueError("log grids require min > 0")
        return self

    def points(self) -> list[float]:
        if self.scale is GridScale.LOG:
            values = np.geomspace(self.min, self.max, self.count)
        else:
            values = np.linspace(self.min, self.max, self.count)
        return [float(v) for v in values]


class SweepConstraints(BaseModel):
    """Targets shared by the inverse solves."""

    model_config = {"frozen": True}

    f_target: float = Field(default=0.9, gt=0.25, le=1.0)
    n_s_target: float = Field(default=0.1, gt=0.0)
    delta_max: float = Field(default=MAX_COLLECTION_ANGLE, gt=0.0, le=MAX_COLLECTION_ANGLE)
    repetition_rate_hz: float = Field(default=1e7, ge=0.0)
    qd_coherence_ns: float = Field(default=10.0, gt=0.0)


class LinkScenario(BaseModel):
    """Complete fixed-parameter set for one link configuration.

    Rates are angular in rad/ns, as in :mod:`hybrid_link.models`.  ``eta`` is
    resolved by the caller (override or first principles).  ``n_ref`` and
    ``tau_mod`` default to the collected photon number ``⟨|β|²⟩`` and the
    cavity-modified QD lifetime.
    """

    model_config = {"frozen": True}

    cavity: CavityQDParams
    atom: AtomParams
    trap: TrapState
    geometry: CollectionGeometry = CollectionGeometry()
    pulse: PulseSpec
    eta: float = Field(ge=0.0)
    n_s: float = Field(default=0.1, ge=0.0)
    beta_enabled: bool = True
    n_ref: float | None = Field(default=None, ge=0.0)
    tau_mod: float | None = Field(default=None, gt=0.0)
    quad: QuadratureSpec = QuadratureSpec()
    root_x_tol: float = Field(default=1e-8, gt=0.0)

    def spectral(self, tau: float | None = None, delta_a: float | None = None) -> SpectralScenario:
        """Spectral scenario with optional pulse duration / atomic detuning overrides."""
        pulse = self.pulse if tau is None else PulseSpec(omega0=self.pulse.omega0, tau=tau, amplitude=self.pulse.amplitude)
        atom = self.atom if delta_a is None else self.atom.model_copy(update={"delta_a": delta_a})
        return SpectralScenario(pulse=pulse, cavity=self.cavity, atom=atom, beta_enabled=self.beta_enabled)

    def recoil(self, n_s: float | None = None) -> RecoilScenario:
        return RecoilScenario(
            eta=self.eta,
            nbar=self.trap.nbar,
            delta=self.geometry.delta_o,
            n_s=self.n_s if n_s is None else n_s,
        )


class SweepRequest(BaseModel):
    """What to sweep, over which axis, and with which fixed parameters."""

    model_config = {"frozen": True}

    figure: FigureId
    grid: GridSpec
    scenario: LinkScenario
    constraints: SweepConstraints = SweepConstraints()
    series: tuple[float, ...] = ()
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _grid_in_domain(self) -> SweepRequest:
        fig, grid = self.figure, self.grid
        if fig is FigureId.FIG3 and grid.min <= 0.0:
            raise ValueError("fig3 sweeps pulse durations; grid min must be > 0")
        if fig in (FigureId.FIG5, FigureId.FIG6) and not (0.0 < grid.min and grid.max <= self.constraints.delta_max):
            raise ValueError(f"{fig} sweeps collection angles; grid must lie in (0, delta_max]")
        if fig is FigureId.FIG7 and grid.min < 0.0:
            raise ValueError("fig7 sweeps nbar; grid min must be >= 0")
        if self.series and fig in (FigureId.FIG4, FigureId.FIG7):
            raise ValueError(f"{fig} takes no series values")
        return self

    def resolved_series(self) -> tuple[float, ...]:
        return self.series or DEFAULT_SERIES.get(self.figure, ())


class SweepResult(BaseModel):
    """Named, equal-length columns in grid order, plus an input echo.

    ``wall_time_s`` is kept apart from ``metadata`` so that table files stay
    byte-stable between runs.
    """

    figure: FigureId
    columns: dict[str, list[Any]]
    metadata: dict[str, Any] = Field(default_factory=dict)
    wall_time_s: float = 0.0

    @model_validator(mode="after")
    def _equal_lengths(self) -> SweepResult:
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"columns have unequal lengths: {sorted(lengths)}")
        return self

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()), []))

    @property
    def n_infeasible(self) -> int:
        return sum(1 for s in self.columns.get("status", []) if s == STATUS_INFEASIBLE)

    def rows(self) -> list[Row]:
        names = list(self.columns)
        return [dict(zip(names, values, strict=True)) for values in zip(*self.columns.values(), strict=True)]


DEFAULT_GRIDS: dict[FigureId, GridSpec] = {
    FigureId.FIG3: GridSpec(min=0.01, max=100.0, count=60, scale=GridScale.LOG),
    FigureId.FIG4: GridSpec(min=0.05, max=20.0, count=30, scale=GridScale.LOG),
    FigureId.FIG5: GridSpec(min=0.01, max=MAX_COLLECTION_ANGLE, count=50),
    FigureId.FIG6: GridSpec(min=0.01, max=MAX_COLLECTION_ANGLE, count=50),
    FigureId.FIG7: GridSpec(min=0.0, max=100.0, count=101),
}

# fig3 series are atomic detunings in GHz; fig5/fig6 series are nbar values.
DEFAULT_SERIES: dict[FigureId, tuple[float, ...]] = {
    FigureId.FIG3: (0.1, 1.0, 10.0),
    FigureId.FIG5: (0.0, 10.0, 100.0, 1000.0),
    FigureId.FIG6: (0.0, 10.0, 100.0, 1000.0),
}


# -----------------------------------------------------------------------
# Inverse solves
# -----------------------------------------------------------------------


def pulse_duration_for_fidelity(f_target: float, delta_a: float, scenario: LinkScenario) -> float:
    """Pulse duration (ns) at which the spectral fidelity reaches ``f_target``.

    The fidelity is scanned on a log grid between 1 ps and 1 μs; Brent's
    method then refines the longest-τ upward crossing in ``log10 τ``.

    Args:
        f_target: Target fidelity.
        delta_a: Atomic detuning at the pulse center, in rad/ns.
        scenario: Fixed link parameters.

    Raises:
        InfeasibleError: If the scan shows no crossing.  The diagnostic
            carries the sampled curve.
    """

    def excess(log_tau: float) -> float:
        return spectral_fidelity(scenario.spectral(tau=10.0**log_tau, delta_a=delta_a), scenario.quad) - f_target

    samples = [excess(x) for x in _TAU_SCAN_LOG10]
    bracket: tuple[float, float] | None = None
    for i in range(len(samples) - 1, 0, -1):
        if samples[i - 1] < 0.0 <= samples[i]:
            bracket = (_TAU_SCAN_LOG10[i - 1], _TAU_SCAN_LOG10[i])
            break
    if bracket is None:
        curve = {
            "tau_ns": [10.0**x for x in _TAU_SCAN_LOG10],
            "fidelity": [s + f_target for s in samples],
        }
        raise InfeasibleError(
            f"fidelity {f_target} not reached for delta_a={angular_to_ghz(delta_a):.6g} GHz within tau in [1 ps, 1 us]",
            diagnostic={"f_target": f_target, "delta_a_ghz": angular_to_ghz(delta_a), **curve},
        )

    log_tau = find_root(excess, RootSpec(bracket=bracket, x_tol=scenario.root_x_tol))
    tau = 10.0**log_tau
    logger.debug("tau(F=%.4g, delta_a=%.4g GHz) = %.6g ns", f_target, angular_to_ghz(delta_a), tau)
    return tau


def intensity_for_scatter(n_s_target: float, delta_a: float, tau: float, atom: AtomParams) -> float:
    """Pump intensity (W/cm²) that scatters ``n_s_target`` photons in a pulse of ``tau`` ns.

    ``I = N_s ħω₀ / (|ℒ(δ_a, γ_a)|² (γ_r/γ_a)² σ₀ τ)``; linear in ``N_s`` and
    inverse in ``τ``.
    """
    if not (n_s_target > 0.0 and tau > 0.0):
        raise DomainError("scattered photon target and pulse duration must be positive")
    if atom.gamma_r == 0.0:
        raise DomainError("no radiative scattering when gamma_r = 0")
    line = abs(lorentzian(delta_a, atom.gamma_a)) ** 2
    branching = (atom.gamma_r / atom.gamma_a) ** 2
    energy = photon_energy(atom.lambda0)
    per_m2 = n_s_target * energy / (line * branching * atomic_cross_section(atom.lambda0) * tau / NS_PER_S)
    return float(per_m2 / 1e4)


def _search_collection_angle(
    f_target: float,
    eta: float,
    nbar: float,
    delta_max: float,
    x_tol: float,
) -> MaximizeResult:
    if not 0.0 < delta_max <= MAX_COLLECTION_ANGLE:
        raise DomainError(f"delta_max must lie in (0, pi/4], got {delta_max}")

    def probability(delta: float) -> float:
        try:
            n_s = n_s_for_fidelity(f_target, eta, nbar, delta)
        except InfeasibleError:
            return 0.0
        return success_probability(RecoilScenario(eta=eta, nbar=nbar, delta=delta, n_s=n_s))

    best = maximize_1d(probability, _MIN_ANGLE_FRACTION * delta_max, delta_max, x_tol)
    if not best.fx > 0.0:
        raise InfeasibleError(
            f"fidelity {f_target} is not reachable at any collection angle for nbar={nbar}",
            diagnostic={"f_target": f_target, "eta": eta, "nbar": nbar, "delta_max": delta_max},
        )
    return best


def optimal_collection_angle(
    f_target: float,
    eta: float,
    nbar: float,
    delta_max: float = MAX_COLLECTION_ANGLE,
    *,
    x_tol: float = 1e-10,
) -> tuple[float, float]:
    """Collection angle maximising the success probability at fixed fidelity.

    For each angle the scattered photon number is set by
    :func:`~hybrid_link.fidelity.n_s_for_fidelity`; angles where the target
    cannot be met contribute zero probability.

    Returns:
        ``(delta_opt, p_opt)``; ``delta_opt == delta_max`` exactly when the
        probability increases all the way to the boundary.

    Raises:
        InfeasibleError: If no angle in ``(0, delta_max]`` reaches ``f_target``.
    """
    best = _search_collection_angle(f_target, eta, nbar, delta_max, x_tol)
    return best.x, best.fx


# -----------------------------------------------------------------------
# Single-scenario report
# -----------------------------------------------------------------------


class LinkReport(BaseModel):
    """Figures of merit for one link configuration (the ``eval`` report)."""

    model_config = {"frozen": True}

    cooperativity: float
    eta: float
    lamb_dicke: bool
    collection_efficiency: float
    n_s: float
    mean_sq_beta: float
    spectral_fidelity: float
    recoil_fidelity: float
    multiphoton_fidelity: float
    success_probability: float
    rate_per_s: float
    validity: ValidityReport


def link_validity(scenario: LinkScenario) -> ValidityReport:
    """Weak-excitation check at the scenario's pulse, with the default QD references filled in."""
    _, mean_sq = thermal_beta_moments(scenario.recoil())
    return weak_excitation_check(
        n_s=scenario.n_s,
        tau=scenario.pulse.tau,
        gamma_a=scenario.atom.gamma_a,
        n_ref=mean_sq if scenario.n_ref is None else scenario.n_ref,
        tau_p=scenario.pulse.tau,
        tau_mod=modified_lifetime(scenario.cavity) if scenario.tau_mod is None else scenario.tau_mod,
    )


def evaluate_link(scenario: LinkScenario, constraints: SweepConstraints | None = None) -> LinkReport:
    constraints = constraints or SweepConstraints()
    recoil = scenario.recoil()
    _, mean_sq = thermal_beta_moments(recoil)
    probability = success_probability(recoil)
    validity = link_validity(scenario)
    return LinkReport(
        cooperativity=cooperativity(scenario.cavity) if scenario.cavity.coupled else 0.0,
        eta=scenario.eta,
        lamb_dicke=lamb_dicke_regime(scenario.eta, scenario.trap.nbar),
        collection_efficiency=collection_efficiency(scenario.geometry.delta_o),
        n_s=scenario.n_s,
        mean_sq_beta=mean_sq,
        spectral_fidelity=spectral_fidelity(scenario.spectral(), scenario.quad),
        recoil_fidelity=recoil_fidelity(recoil),
        multiphoton_fidelity=multiphoton_fidelity(recoil),
        success_probability=probability,
        rate_per_s=entanglement_rate(probability, constraints.repetition_rate_hz),
        validity=validity,
    )


# -----------------------------------------------------------------------
# Per-figure point evaluators
# -----------------------------------------------------------------------


def _fig3_point(req: SweepRequest, tau: float, delta_a_ghz: float) -> Row:
    s = req.scenario.spectral(tau=tau, delta_a=ghz_to_angular(delta_a_ghz))
    return {"tau_ns": tau, "delta_a_ghz": delta_a_ghz, "fidelity": spectral_fidelity(s, req.scenario.quad)}


def _fig4_point(req: SweepRequest, delta_a_ghz: float) -> Row:
    c = req.constraints
    delta_a = ghz_to_angular(delta_a_ghz)
    try:
        tau = pulse_duration_for_fidelity(c.f_target, delta_a, req.scenario)
    except InfeasibleError as exc:
        logger.warning("fig4 point delta_a=%g GHz infeasible: %s", delta_a_ghz, exc)
        return {
            "delta_a_ghz": delta_a_ghz,
            "tau_ns": math.nan,
            "intensity_w_per_cm2": math.nan,
            "coherent_regime": 0,
            "status": STATUS_INFEASIBLE,
        }
    return {
        "delta_a_ghz": delta_a_ghz,
        "tau_ns": tau,
        "intensity_w_per_cm2": intensity_for_scatter(c.n_s_target, delta_a, tau, req.scenario.atom),
        "coherent_regime": int(tau < c.qd_coherence_ns),
        "status": STATUS_OK,
    }


def _fig5_point(req: SweepRequest, delta: float, nbar: float) -> Row:
    r = RecoilScenario(eta=req.scenario.eta, nbar=nbar, delta=delta)
    return {"delta_rad": delta, "nbar": nbar, "fidelity": recoil_fidelity(r)}


def _fig6_point(req: SweepRequest, delta: float, nbar: float) -> Row:
    f_target = req.constraints.f_target
    try:
        n_s = n_s_for_fidelity(f_target, req.scenario.eta, nbar, delta)
    except InfeasibleError:
        logger.debug("fig6 point delta=%g nbar=%g infeasible", delta, nbar)
        return {"delta_rad": delta, "nbar": nbar, "n_s": math.nan, "probability": math.nan, "status": STATUS_INFEASIBLE}
    r = RecoilScenario(eta=req.scenario.eta, nbar=nbar, delta=delta, n_s=n_s)
    return {"delta_rad": delta, "nbar": nbar, "n_s": n_s, "probability": success_probability(r), "status": STATUS_OK}


def _fig7_point(req: SweepRequest, nbar: float) -> Row:
    c, eta = req.constraints, req.scenario.eta
    lamb_dicke = int(lamb_dicke_regime(eta, nbar))
    try:
        best = _search_collection_angle(c.f_target, eta, nbar, c.delta_max, x_tol=1e-10)
    except InfeasibleError as exc:
        logger.warning("fig7 point nbar=%g infeasible: %s", nbar, exc)
        # an all-zero scan has a single (flat) mode
        return {
            "nbar": nbar,
            "delta_opt_rad": math.nan,
            "probability": math.nan,
            "rate_per_s": math.nan,
            "lamb_dicke": lamb_dicke,
            "unimodal": 1,
            "status": STATUS_INFEASIBLE,
        }
    return {
        "nbar": nbar,
        "delta_opt_rad": best.x,
        "probability": best.fx,
        "rate_per_s": entanglement_rate(best.fx, c.repetition_rate_hz),
        "lamb_dicke": lamb_dicke,
        "unimodal": int(best.unimodal),
        "status": STATUS_OK,
    }


def _point_tasks(req: SweepRequest) -> list[Callable[[], Row]]:
    """One zero-argument callable per output row, in output order (series-major)."""
    grid = req.grid.points()
    series = req.resolved_series()
    match req.figure:
        case FigureId.FIG3:
            return [lambda t=t, d=d: _fig3_point(req, t, d) for d in series for t in grid]
        case FigureId.FIG4:
            return [lambda d=d: _fig4_point(req, d) for d in grid]
        case FigureId.FIG5:
            return [lambda x=x, n=n: _fig5_point(req, x, n) for n in series for x in grid]
        case FigureId.FIG6:
            return [lambda x=x, n=n: _fig6_point(req, x, n) for n in series for x in grid]
        case FigureId.FIG7:
            return [lambda n=n: _fig7_point(req, n) for n in grid]
    raise DomainError(f"unknown figure {req.figure!r}")


# -----------------------------------------------------------------------
# Evaluation
# -----------------------------------------------------------------------


async def _evaluate_async(tasks: list[Callable[[], Row]], workers: int) -> list[Row]:
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="sweep") as pool:
        futures = [loop.run_in_executor(pool, task) for task in tasks]
        return list(await asyncio.gather(*futures))


def _evaluate(tasks: list[Callable[[], Row]], workers: int) -> list[Row]:
    """Run every task; the returned rows follow task order regardless of completion order."""
    if workers <= 1:
        return [task() for task in tasks]

    try:
        loop = asyncio.get_running_loop()
    except RuntimeError:
        loop = None

    if loop is None or not loop.is_running():
        return asyncio.run(_evaluate_async(tasks, workers))

    # Already inside an event loop (notebook, IPython): use a private thread.
    out: list[list[Row]] = []
    exc: list[BaseException | None] = [None]

    def _target() -> None:
        try:
            out.append(asyncio.run(_evaluate_async(tasks, workers)))
        except BaseException as e:
            exc[0] = e

    t = threading.Thread(target=_target, daemon=True)
    t.start()
    t.join()
    if exc[0] is not None:
        raise exc[0]
    return out[0]


def _metadata(req: SweepRequest) -> dict[str, Any]:
    from hybrid_link import __version__

    return {
        "figure": str(req.figure),
        "tool_version": __version__,
        "grid": req.grid.model_dump(mode="json"),
        "series": list(req.resolved_series()),
        "constraints": req.constraints.model_dump(mode="json"),
        "tolerances": {
            "rel_tol": req.scenario.quad.rel_tol,
            "abs_tol": req.scenario.quad.abs_tol,
            "max_subdivisions": req.scenario.quad.max_subdivisions,
            "root_x_tol": req.scenario.root_x_tol,
        },
        "scenario": req.scenario.model_dump(mode="json"),
    }


def run_sweep(req: SweepRequest) -> SweepResult:
    """Evaluate every point of ``req`` and assemble the figure's columns.

    Raises:
        QuadratureError: If a spectral integral fails to converge.
    """
    tasks = _point_tasks(req)
    logger.info("Starting %s sweep: %d points, %d worker(s)", req.figure, len(tasks), req.workers)
    started = time.perf_counter()
    rows = _evaluate(tasks, req.workers)
    elapsed = time.perf_counter() - started

    columns: dict[str, list[Any]] = {name: [] for name in rows[0]} if rows else {}
    for row in rows:
        for name, value in row.items():
            columns[name].append(value)

    result = SweepResult(figure=req.figure, columns=columns, metadata=_metadata(req), wall_time_s=elapsed)
    if result.n_infeasible:
        logger.warning("%s: %d of %d points infeasible", req.figure, result.n_infeasible, result.n_rows)
    logger.info("Finished %s sweep in %.2fs", req.figure, elapsed)
    return result
