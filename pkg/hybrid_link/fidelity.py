"""Entanglement fidelity, success probability and validity checks.

Two families of results live here:

- the *spectral* fidelity of the heralded state under pulsed excitation,
  obtained by integrating the cavity-reflected and atom-scattered branch
  spectra over frequency (:func:`spectral_fidelity`);
- the *monochromatic* closed forms that account for thermal recoil and
  multi-photon scattering (:func:`recoil_fidelity`,
  :func:`multiphoton_fidelity`, :func:`success_probability`) together with
  their inverse (:func:`n_s_for_fidelity`).
"""

from __future__ import annotations

import logging
import math
from enum import StrEnum

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, model_validator

from hybrid_link.errors import DomainError, InfeasibleError
from hybrid_link.models import MAX_COLLECTION_ANGLE, AtomParams, CavityQDParams, PulseSpec
from hybrid_link.numerics import QuadratureSpec, integrate_adaptive
from hybrid_link.optics import cavity_reflectivity, lorentzian

__all__ = [
    "SPECTRAL_WINDOW",
    "RecoilScenario",
    "SpectralScenario",
    "ValidityReport",
    "Verdict",
    "branch_amplitudes",
    "collection_efficiency",
    "entanglement_rate",
    "integration_window",
    "lamb_dicke_regime",
    "monochromatic_fidelity",
    "multiphoton_fidelity",
    "n_s_for_fidelity",
    "pulse_spectrum",
    "q_factor",
    "recoil_fidelity",
    "spectral_fidelity",
    "success_probability",
    "thermal_beta_moments",
    "weak_excitation_check",
]

logger = logging.getLogger("hybrid_link.fidelity")

# Half-width of the integration window in units of 1/τ.  |Ω|² has fallen
# below 1e-300 of its peak at the edges.
SPECTRAL_WINDOW: float = 40.0

_Q_SERIES_CUTOFF = 1e-6


# -----------------------------------------------------------------------
# Scenario records
# -----------------------------------------------------------------------


class SpectralScenario(BaseModel):
    """Everything the pulsed-excitation fidelity depends on.

    Attributes:
        pulse: Gaussian input pulse.
        cavity: Cavity-QD response parameters.
        atom: Atomic transition; ``atom.delta_a`` is the detuning at the
            pulse line center ``pulse.omega0``.
        matching_frequency: Frequency at which the two branches are matched
            in amplitude and phase.  ``None`` means the pulse center.
        beta_enabled: ``False`` removes the atom branch entirely.
    """

    model_config = {"frozen": True}

    pulse: PulseSpec
    cavity: CavityQDParams
    atom: AtomParams
    matching_frequency: float | None = None
    beta_enabled: bool = True

    @model_validator(mode="after")
    def _matching_inside_window(self) -> SpectralScenario:
        if self.matching_frequency is not None:
            half_width = SPECTRAL_WINDOW / self.pulse.tau
            if abs(self.matching_frequency - self.pulse.omega0) >= half_width:
                raise ValueError("matching_frequency lies outside the spectral integration window")
        return self

    @property
    def omega_match(self) -> float:
        return self.pulse.omega0 if self.matching_frequency is None else self.matching_frequency

    @property
    def atom_resonance(self) -> float:
        """Atomic resonance ``ω_a = ω₀ - δ_a`` on the common frequency axis."""
        return self.pulse.omega0 - self.atom.delta_a


class RecoilScenario(BaseModel):
    """Inputs of the monochromatic recoil / multi-photon closed forms.

    Attributes:
        eta: Lamb-Dicke parameter.
        nbar: Mean thermal vibrational occupation.
        delta: Collection half-angle Δ in radians (inner angle → 0).
        n_s: Total scattered photon number.
    """

    model_config = {"frozen": True}

    eta: float = Field(ge=0.0)
    nbar: float = Field(ge=0.0)
    delta: float = Field(gt=0.0, le=MAX_COLLECTION_ANGLE)
    n_s: float = Field(default=0.0, ge=0.0)

    @property
    def recoil_exponent(self) -> float:
        """``η² (n̄ + 1) Δ²``, the argument of :func:`q_factor`."""
        return self.eta**2 * (self.nbar + 1.0) * self.delta**2


class Verdict(StrEnum):
    """Outcome of a weak-excitation ratio test."""

    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"

    @classmethod
    def for_ratio(cls, ratio: float) -> Verdict:
        if ratio < 0.1:
            return cls.PASS
        if ratio < 1.0:
            return cls.WARN
        return cls.FAIL


class ValidityReport(BaseModel):
    """Weak-excitation ratios for both nodes and their verdicts."""

    model_config = {"frozen": True}

    atom_ratio: float = Field(ge=0.0)
    qd_ratio: float = Field(ge=0.0)
    atom_verdict: Verdict
    qd_verdict: Verdict

    @property
    def failed(self) -> bool:
        return Verdict.FAIL in (self.atom_verdict, self.qd_verdict)


# -----------------------------------------------------------------------
# Spectral fidelity
# -----------------------------------------------------------------------


def pulse_spectrum(omega: float | NDArray[np.float64], p: PulseSpec) -> complex | NDArray[np.complex128]:
    """Gaussian pulse spectrum ``Ω₀ exp(-τ²(ω - ω₀)²/4)``."""
    return p.amplitude * np.exp(-(p.tau**2) * (omega - p.omega0) ** 2 / 4.0) + 0j


def integration_window(s: SpectralScenario) -> tuple[float, float, tuple[float, ...]]:
    """Truncated frequency window and the breakpoints that must be resolved.

    Returns ``(lo, hi, breakpoints)``: the pulse center, the atomic resonance
    and the QD resonance, each kept only when strictly inside the window.
    """
    half_width = SPECTRAL_WINDOW / s.pulse.tau
    lo, hi = s.pulse.omega0 - half_width, s.pulse.omega0 + half_width
    candidates = [s.pulse.omega0, s.cavity.omega_c - s.cavity.delta_qd]
    if s.beta_enabled:
        candidates.append(s.atom_resonance)
    points = tuple(sorted({p for p in candidates if lo < p < hi}))
    return lo, hi, points


def branch_amplitudes(
    omega: float | NDArray[np.float64], s: SpectralScenario
) -> tuple[complex | NDArray[np.complex128], complex | NDArray[np.complex128]]:
    """Cavity branch ``α(ω)`` and atom branch ``β(ω)``, matched at ``s.omega_match``.

    ``α = α₀ r(ω) Ω(ω)`` and ``β = β₀ ℒ(δ_a(ω), γ_a) Ω(ω)`` with the complex
    scales chosen so that both equal ``Ω`` at the matching frequency.
    """
    spectrum = pulse_spectrum(omega, s.pulse)
    r_match = complex(cavity_reflectivity(s.omega_match, s.cavity))
    alpha_scale = 1.0 / r_match if r_match != 0 else 1.0
    alpha = alpha_scale * cavity_reflectivity(omega, s.cavity) * spectrum
    if not s.beta_enabled:
        return alpha, 0.0 * spectrum
    atom_resonance = s.atom_resonance
    beta_scale = 1.0 / complex(lorentzian(s.omega_match - atom_resonance, s.atom.gamma_a))
    beta = beta_scale * lorentzian(omega - atom_resonance, s.atom.gamma_a) * spectrum
    return alpha, beta


def _numerator_density(omega: float, s: SpectralScenario) -> float:
    alpha, beta = branch_amplitudes(omega, s)
    return float(abs(alpha + beta) ** 2)


def _denominator_density(omega: float, s: SpectralScenario) -> float:
    alpha, beta = branch_amplitudes(omega, s)
    return float(abs(alpha) ** 2 + abs(beta) ** 2 - (np.conj(alpha) * beta).real)


def spectral_fidelity(s: SpectralScenario, quad: QuadratureSpec | None = None) -> float:
    """Fidelity of the heralded state with the singlet under pulsed excitation.

    ``F = ¼ ∫|α+β|² dω / ∫(|α|² + |β|² - Re{α*β}) dω``, integrated over the
    pulse center ± 40/τ with the atomic resonance pinned as a breakpoint.
    """
    lo, hi, points = integration_window(s)
    spec = (quad or QuadratureSpec()).with_breakpoints(points)
    numerator = integrate_adaptive(lambda w: _numerator_density(w, s), lo, hi, spec)
    denominator = integrate_adaptive(lambda w: _denominator_density(w, s), lo, hi, spec)
    if not denominator.value > 0.0:
        raise DomainError("spectral fidelity undefined: both branches vanish over the pulse")
    fidelity = 0.25 * numerator.value / denominator.value
    logger.debug(
        "spectral_fidelity tau=%.6g delta_a=%.6g -> %.12f (%d+%d evaluations)",
        s.pulse.tau,
        s.atom.delta_a,
        fidelity,
        numerator.n_evaluations,
        denominator.n_evaluations,
    )
    return fidelity


def monochromatic_fidelity(alpha: complex, beta: complex) -> float:
    """Single-frequency singlet fidelity of the heralded state for branch amplitudes α, β."""
    denominator = abs(alpha) ** 2 + abs(beta) ** 2 - (alpha.conjugate() * beta).real
    if not denominator > 0.0:
        raise DomainError("fidelity undefined when both branch amplitudes vanish")
    return 0.25 * abs(alpha + beta) ** 2 / denominator


# -----------------------------------------------------------------------
# Recoil and multi-photon closed forms
# -----------------------------------------------------------------------


def q_factor(x: float) -> float:
    """Recoil overlap ``Q(x) = (1 - e^{-x}) / x`` with ``Q(0) = 1``."""
    if x < 0.0:
        raise DomainError(f"Q(x) requires x >= 0, got {x}")
    if x < _Q_SERIES_CUTOFF:
        return 1.0 - x / 2.0 + x**2 / 6.0 - x**3 / 24.0
    return -math.expm1(-x) / x


def thermal_beta_moments(r: RecoilScenario) -> tuple[complex, float]:
    """Thermal averages ``(⟨β⟩, ⟨|β|²⟩)`` of the collected atom amplitude."""
    mean_sq = 3.0 / 8.0 * r.n_s * r.delta**2
    mean = -math.sqrt(mean_sq) * q_factor(r.recoil_exponent)
    return complex(mean, 0.0), mean_sq


def recoil_fidelity(r: RecoilScenario) -> float:
    """Fidelity limited by thermal recoil at the optimal cavity amplitude.

    ``F = ½ (1 + Q) / (2 - Q)``; independent of ``r.n_s``.
    """
    q = q_factor(r.recoil_exponent)
    return 0.5 * (1.0 + q) / (2.0 - q)


def multiphoton_fidelity(r: RecoilScenario) -> float:
    """Fidelity limited by recoil and multi-photon scattering.

    ``F = ½ (1 + e^{-N_s/2} Q) / (2 - Q)``.
    """
    q = q_factor(r.recoil_exponent)
    return 0.5 * (1.0 + math.exp(-r.n_s / 2.0) * q) / (2.0 - q)


def success_probability(r: RecoilScenario) -> float:
    """Heralding probability ``1 - exp(-⟨|β|²⟩/4) = 1 - exp(-3 N_s Δ² / 32)``."""
    _, mean_sq = thermal_beta_moments(r)
    return -math.expm1(-mean_sq / 4.0)


def n_s_for_fidelity(f_target: float, eta: float, nbar: float, delta: float) -> float:
    """Scattered photon number at which :func:`multiphoton_fidelity` equals ``f_target``.

    Raises:
        InfeasibleError: If ``f_target`` exceeds the recoil-limited maximum
            at this geometry, or lies at or below the ``N_s → ∞`` floor.
    """
    geometry = RecoilScenario(eta=eta, nbar=nbar, delta=delta)
    q = q_factor(geometry.recoil_exponent)
    f_max = 0.5 * (1.0 + q) / (2.0 - q)
    f_floor = 0.5 / (2.0 - q)
    diagnostic = {"f_target": f_target, "f_max": f_max, "f_floor": f_floor, "delta": delta}
    if f_target > f_max * (1.0 + 1e-14):
        raise InfeasibleError(
            f"fidelity {f_target} exceeds the achievable maximum {f_max:.12g} at delta={delta:.6g}",
            diagnostic=diagnostic,
        )
    if f_target <= f_floor:
        raise InfeasibleError(
            f"fidelity {f_target} is at or below the multi-photon floor {f_floor:.12g} (N_s -> infinity)",
            diagnostic=diagnostic,
        )
    survival = (2.0 * f_target * (2.0 - q) - 1.0) / q
    if survival >= 1.0:
        return 0.0
    return -2.0 * math.log(survival)


def collection_efficiency(delta: float) -> float:
    """Fraction ``⟨|β|²⟩ / N_s = 3Δ²/8`` of scattered photons reaching the fiber."""
    if not 0.0 <= delta <= MAX_COLLECTION_ANGLE:
        raise DomainError(f"collection angle must lie in [0, pi/4], got {delta}")
    return 3.0 / 8.0 * delta**2


def lamb_dicke_regime(eta: float, nbar: float) -> bool:
    """``True`` while ``n̄ < 1/η``, where recoil does not limit the link."""
    return eta == 0.0 or nbar < 1.0 / eta


def entanglement_rate(probability: float, repetition_rate_hz: float) -> float:
    """Heralded successes per second at the given attempt rate."""
    if not 0.0 <= probability <= 1.0 or repetition_rate_hz < 0.0:
        raise DomainError("probability must lie in [0, 1] and the repetition rate be non-negative")
    return probability * repetition_rate_hz


# -----------------------------------------------------------------------
# Weak-excitation validity
# -----------------------------------------------------------------------


def weak_excitation_check(
    n_s: float,
    tau: float,
    gamma_a: float,
    n_ref: float,
    tau_p: float,
    tau_mod: float,
) -> ValidityReport:
    """Compare scattering rates with the emitters' response rates.

    The atom stays linear while ``N_s/τ ≪ γ_a``; the QD while
    ``N_ref/τ_p ≪ 1/τ_mod``.  Ratios below 0.1 pass, below 1 warn,
    otherwise fail.
    """
    if min(tau, gamma_a, tau_p, tau_mod) <= 0.0:
        raise DomainError("durations and rates must be positive")
    if min(n_s, n_ref) < 0.0:
        raise DomainError("photon numbers must be non-negative")
    atom_ratio = (n_s / tau) / gamma_a
    qd_ratio = (n_ref / tau_p) * tau_mod
    return ValidityReport(
        atom_ratio=atom_ratio,
        qd_ratio=qd_ratio,
        atom_verdict=Verdict.for_ratio(atom_ratio),
        qd_verdict=Verdict.for_ratio(qd_ratio),
    )
