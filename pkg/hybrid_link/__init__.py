"""Hybrid link model - fidelity and success probability of heralded
entanglement between a cavity-coupled quantum dot and a trapped ion.

Quick start::

    from hybrid_link import RunConfig, evaluate_link, recoil_fidelity

    cfg = RunConfig(tau_ns=10.0, delta_a_ghz=0.1)
    report = evaluate_link(cfg.scenario(), cfg.constraints())
    print(report.spectral_fidelity, report.success_probability)
"""

from __future__ import annotations

from hybrid_link.config import RunConfig, parse_config, serialize_config
from hybrid_link.fidelity import (
    RecoilScenario,
    SpectralScenario,
    ValidityReport,
    multiphoton_fidelity,
    n_s_for_fidelity,
    recoil_fidelity,
    spectral_fidelity,
    success_probability,
    weak_excitation_check,
)
from hybrid_link.models import AtomParams, CavityQDParams, CollectionGeometry, PulseSpec, TrapState
from hybrid_link.sweeps import (
    FigureId,
    GridSpec,
    LinkScenario,
    SweepRequest,
    SweepResult,
    evaluate_link,
    optimal_collection_angle,
    pulse_duration_for_fidelity,
    run_sweep,
)

__all__ = [
    "AtomParams",
    "CavityQDParams",
    "CollectionGeometry",
    "FigureId",
    "GridSpec",
    "LinkScenario",
    "PulseSpec",
    "RecoilScenario",
    "RunConfig",
    "SpectralScenario",
    "SweepRequest",
    "SweepResult",
    "TrapState",
    "ValidityReport",
    "evaluate_link",
    "multiphoton_fidelity",
    "n_s_for_fidelity",
    "optimal_collection_angle",
    "parse_config",
    "pulse_duration_for_fidelity",
    "recoil_fidelity",
    "run_sweep",
    "serialize_config",
    "spectral_fidelity",
    "success_probability",
    "weak_excitation_check",
]

__version__ = "0.1.0"
