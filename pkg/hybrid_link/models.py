"""Parameter records for the two nodes of the hybrid link.

Every record is a frozen pydantic model: values are validated once at
construction and never change afterwards, so records can be shared freely
between sweep workers.

Units: rates and detunings are angular, in rad/ns; trap quantities are SI
(kg, rad/s); angles are radians.  Ordinary-frequency inputs (GHz, MHz) are
converted in :mod:`hybrid_link.config` and nowhere else.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, Field, model_validator

__all__ = [
    "MAX_COLLECTION_ANGLE",
    "AtomParams",
    "CavityQDParams",
    "CollectionGeometry",
    "PulseSpec",
    "TrapState",
]

# Collection optics cannot exceed a 45° half-angle (numerical aperture ~1).
MAX_COLLECTION_ANGLE: float = math.pi / 4


class CavityQDParams(BaseModel):
    """Optical response inputs of the cavity-coupled quantum dot.

    Attributes:
        g: QD-cavity coupling strength.
        kappa: Cavity linewidth κ.
        gamma_qd: QD exciton dipole decay rate.
        omega_c: Cavity resonance, as an offset from the common frequency
            reference (the cavity itself by default, hence ``0``).
        delta_qd: QD-laser detuning at a cavity-resonant line center; the QD
            resonance therefore sits at ``omega_c - delta_qd``.
        coupled: Spin branch selector.  ``True`` is the reflective branch
            (QD couples to the cavity); ``False`` is the transmissive branch,
            modelled with the cooperativity forced to zero.
    """

    model_config = {"frozen": True}

    g: float = Field(ge=0.0)
    kappa: float = Field(gt=0.0)
    gamma_qd: float = Field(gt=0.0)
    omega_c: float = 0.0
    delta_qd: float = 0.0
    coupled: bool = True


class AtomParams(BaseModel):
    """Transition inputs of the trapped atom.

    Attributes:
        gamma_a: Total dipole decay rate (including dephasing).
        gamma_r: Radiative decay rate back to the scattering qubit state.
        lambda0: Transition wavelength in metres.
        delta_a: Laser-atom detuning ``ω - ω_a`` at the pulse line center.
    """

    model_config = {"frozen": True}

    gamma_a: float = Field(gt=0.0)
    gamma_r: float = Field(ge=0.0)
    lambda0: float = Field(gt=0.0)
    delta_a: float = 0.0

    @model_validator(mode="after")
    def _radiative_within_total(self) -> AtomParams:
        if self.gamma_r > self.gamma_a:
            raise ValueError(f"gamma_r ({self.gamma_r}) must not exceed gamma_a ({self.gamma_a})")
        return self


class TrapState(BaseModel):
    """Motional state of the trapped atom (SI units)."""

    model_config = {"frozen": True}

    mass: float = Field(gt=0.0)
    omega_t: float = Field(gt=0.0)
    nbar: float = Field(default=0.0, ge=0.0)


class CollectionGeometry(BaseModel):
    """Angular collection window between ``delta_i`` and ``delta_o``."""

    model_config = {"frozen": True}

    delta_i: float = Field(default=0.0, ge=0.0)
    delta_o: float = Field(default=MAX_COLLECTION_ANGLE, gt=0.0)

    @model_validator(mode="after")
    def _ordered_window(self) -> CollectionGeometry:
        if not self.delta_i < self.delta_o:
            raise ValueError(f"delta_i ({self.delta_i}) must be smaller than delta_o ({self.delta_o})")
        if self.delta_o > MAX_COLLECTION_ANGLE + 1e-15:
            raise ValueError(f"delta_o ({self.delta_o}) exceeds the 45 degree collection limit")
        return self


class PulseSpec(BaseModel):
    """Gaussian input pulse.

    Attributes:
        omega0: Center frequency, offset from the cavity resonance.
        tau: Pulse duration in ns.
        amplitude: Peak spectral amplitude Ω₀.  Fidelities do not depend on it.
    """

    model_config = {"frozen": True}

    omega0: float = 0.0
    tau: float = Field(gt=0.0)
    amplitude: float = Field(default=1.0, ge=0.0)
