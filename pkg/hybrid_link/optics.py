"""Frequency-domain optical response of both link nodes.

The functions here are pure and accept either Python scalars or numpy
arrays for the frequency argument, so the same code serves pointwise
evaluation inside adaptive quadrature and vectorised evaluation on grids.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

from hybrid_link.constants import C, EPSILON_0, HBAR, NS_PER_S, TWO_PI
from hybrid_link.errors import DomainError
from hybrid_link.models import AtomParams, CavityQDParams, CollectionGeometry, TrapState

__all__ = [
    "atomic_cross_section",
    "cavity_reflectivity",
    "cavity_transmission",
    "collection_area",
    "cooperativity",
    "incident_photon_density",
    "lamb_dicke",
    "lorentzian",
    "modified_lifetime",
    "photon_energy",
    "radiative_decay_rate",
    "scattered_photon_number",
    "transition_angular_frequency",
    "window_area",
]


# -----------------------------------------------------------------------
# Line shapes
# -----------------------------------------------------------------------


def lorentzian(delta: float | NDArray[np.float64], gamma: float) -> complex | NDArray[np.complex128]:
    """Complex Lorentzian profile ``γ / (γ - iδ)``.

    Raises:
        DomainError: If ``gamma`` is not strictly positive.
    """
    if not gamma > 0.0:
        raise DomainError(f"Lorentzian width must be positive, got {gamma}")
    return gamma / (gamma - 1j * delta)


# -----------------------------------------------------------------------
# Cavity-QD node
# -----------------------------------------------------------------------


def cooperativity(p: CavityQDParams) -> float:
    """QD-cavity cooperativity ``4g² / (γ_qd κ)``."""
    return 4.0 * p.g**2 / (p.gamma_qd * p.kappa)


def _qd_loading(omega: float | NDArray[np.float64], p: CavityQDParams) -> complex | NDArray[np.complex128]:
    """``𝒞·ℒ(δ_qd, γ_qd)`` for the coupled branch, exactly zero otherwise."""
    if not p.coupled:
        return 0j
    delta_qd = (omega - p.omega_c) + p.delta_qd
    return cooperativity(p) * lorentzian(delta_qd, p.gamma_qd)


def cavity_reflectivity(omega: float | NDArray[np.float64], p: CavityQDParams) -> complex | NDArray[np.complex128]:
    """Reflection coefficient ``(-iΔ + 𝒞ℒ) / (1 - iΔ + 𝒞ℒ)`` with ``Δ = (ω - ω_c)/κ``."""
    scaled = (omega - p.omega_c) / p.kappa
    loading = _qd_loading(omega, p)
    return (-1j * scaled + loading) / (1.0 - 1j * scaled + loading)


def cavity_transmission(omega: float | NDArray[np.float64], p: CavityQDParams) -> complex | NDArray[np.complex128]:
    """Transmission coefficient ``1 / (1 - iΔ + 𝒞ℒ)``; equals ``1 - r`` exactly."""
    scaled = (omega - p.omega_c) / p.kappa
    loading = _qd_loading(omega, p)
    return 1.0 / (1.0 - 1j * scaled + loading)


def modified_lifetime(p: CavityQDParams) -> float:
    """Cavity-enhanced QD lifetime ``1 / (γ_qd (1 + 𝒞))`` in ns."""
    return 1.0 / (p.gamma_qd * (1.0 + cooperativity(p)))


# -----------------------------------------------------------------------
# Atom node
# -----------------------------------------------------------------------


def atomic_cross_section(lambda0: float) -> float:
    """Resonant scattering cross section ``3λ² / 2π`` in m²."""
    if not lambda0 > 0.0:
        raise DomainError(f"wavelength must be positive, got {lambda0}")
    return 3.0 * lambda0**2 / TWO_PI


def radiative_decay_rate(omega0: float, dipole: float) -> float:
    """Free-space radiative rate ``ω₀³d² / (6πε₀ħc³)`` in rad/s.

    Args:
        omega0: Transition angular frequency in rad/s.
        dipole: Dipole moment in C·m.
    """
    if not omega0 > 0.0:
        raise DomainError(f"transition frequency must be positive, got {omega0}")
    if dipole < 0.0:
        raise DomainError(f"dipole moment must be non-negative, got {dipole}")
    return omega0**3 * dipole**2 / (6.0 * math.pi * EPSILON_0 * HBAR * C**3)


def scattered_photon_number(a: AtomParams, n_i: float) -> float:
    """Photons scattered by the atom for an incident areal photon density ``n_i`` (m⁻²).

    ``N_s = |ℒ(δ_a, γ_a)|² (γ_r/γ_a)² σ₀ n_i``.
    """
    if n_i < 0.0:
        raise DomainError(f"photon density must be non-negative, got {n_i}")
    line = abs(lorentzian(a.delta_a, a.gamma_a)) ** 2
    branching = (a.gamma_r / a.gamma_a) ** 2
    return float(line * branching * atomic_cross_section(a.lambda0) * n_i)


def transition_angular_frequency(lambda0: float) -> float:
    """Optical angular frequency ``2πc/λ`` in rad/s."""
    if not lambda0 > 0.0:
        raise DomainError(f"wavelength must be positive, got {lambda0}")
    return TWO_PI * C / lambda0


def photon_energy(lambda0: float) -> float:
    """Photon energy ``ħω₀`` in J."""
    return HBAR * transition_angular_frequency(lambda0)


def incident_photon_density(intensity_w_per_cm2: float, tau_ns: float, lambda0: float) -> float:
    """Areal photon density ``n_i = I τ / ħω₀`` (m⁻²) delivered by a pulse."""
    if intensity_w_per_cm2 < 0.0 or not tau_ns > 0.0:
        raise DomainError("intensity must be non-negative and duration positive")
    fluence = intensity_w_per_cm2 * 1e4 * tau_ns / NS_PER_S  # J/m²
    return fluence / photon_energy(lambda0)


# -----------------------------------------------------------------------
# Motion and collection optics
# -----------------------------------------------------------------------


def lamb_dicke(t: TrapState, lambda0: float) -> float:
    """Lamb-Dicke parameter ``η = k √(ħ / 2mω_t)`` with ``k = 2π/λ``."""
    if not lambda0 > 0.0:
        raise DomainError(f"wavelength must be positive, got {lambda0}")
    k = TWO_PI / lambda0
    return k * math.sqrt(HBAR / (2.0 * t.mass * t.omega_t))


def window_area(delta_i: float, delta_o: float, *, paraxial: bool = False) -> float:
    """Area of the annular window between two half-angles on the unit sphere.

    Exact form ``2π(cos Δᵢ - cos Δₒ)``; with ``paraxial=True`` the small-angle
    form ``π(Δₒ² - Δᵢ²)``.
    """
    if not 0.0 <= delta_i <= delta_o <= math.pi:
        raise DomainError(f"need 0 <= delta_i <= delta_o <= pi, got ({delta_i}, {delta_o})")
    if paraxial:
        return math.pi * (delta_o**2 - delta_i**2)
    return TWO_PI * (math.cos(delta_i) - math.cos(delta_o))


def collection_area(c: CollectionGeometry, *, paraxial: bool = False) -> float:
    """Solid-angle area of a validated collection window."""
    return window_area(c.delta_i, c.delta_o, paraxial=paraxial)
