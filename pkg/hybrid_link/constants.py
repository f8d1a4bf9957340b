"""Physical constants and unit conversions.

All values come from the CODATA table shipped with ``scipy.constants`` and
are frozen here as module-level floats so every model evaluates against one
table.  Internal rates are *angular* and expressed per nanosecond; the
helpers below are the only place ordinary frequencies are turned into them.
"""

from __future__ import annotations

import math

from scipy import constants as _codata

__all__ = [
    "AMU",
    "C",
    "EPSILON_0",
    "HBAR",
    "NS_PER_S",
    "TWO_PI",
    "ghz_to_angular",
    "mhz_to_angular",
    "angular_to_ghz",
]

HBAR: float = float(_codata.hbar)  # J·s
C: float = float(_codata.c)  # m/s
EPSILON_0: float = float(_codata.epsilon_0)  # F/m
AMU: float = float(_codata.atomic_mass)  # kg

NS_PER_S: float = 1e9
TWO_PI: float = 2.0 * math.pi


def ghz_to_angular(freq_ghz: float) -> float:
    """Ordinary frequency in GHz → angular rate in rad/ns (×2π)."""
    return TWO_PI * freq_ghz


def mhz_to_angular(freq_mhz: float) -> float:
    """Ordinary frequency in MHz → angular rate in rad/ns."""
    return TWO_PI * freq_mhz * 1e-3


def angular_to_ghz(rate: float) -> float:
    """Angular rate in rad/ns → ordinary frequency in GHz."""
    return rate / TWO_PI
