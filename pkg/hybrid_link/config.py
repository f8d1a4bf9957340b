"""Run configuration: a flat YAML document with unit-suffixed keys.

Every key is optional; omitted keys take the reference parameter set
(g/2π = 16 GHz, κ/2π = 25 GHz, γ_qd/2π = 1 GHz, γ_a/2π = 4.2 MHz,
λ = 935 nm, η = 0.09).  Example:

.. code-block:: yaml

    # cavity
    g_ghz: 16.0
    kappa_ghz: 25.0
    # atom
    delta_a_ghz: 0.1
    tau_ns: 10.0
    # trap: remove the override to derive eta from mass and trap frequency
    eta_override: null
    nbar_series: [0, 10, 100]

Ordinary frequencies (GHz, MHz) are converted to angular rad/ns here and
nowhere else.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator

from hybrid_link.constants import AMU, ghz_to_angular, mhz_to_angular
from hybrid_link.errors import ConfigError
from hybrid_link.models import (
    MAX_COLLECTION_ANGLE,
    AtomParams,
    CavityQDParams,
    CollectionGeometry,
    PulseSpec,
    TrapState,
)
from hybrid_link.numerics import QuadratureSpec
from hybrid_link.optics import lamb_dicke
from hybrid_link.sweeps import LinkScenario, SweepConstraints

__all__ = ["RunConfig", "parse_config", "serialize_config"]

logger = logging.getLogger("hybrid_link.config")


class _KeyedValueError(ValueError):
    """Cross-field invariant violation attributed to one config key."""

    def __init__(self, key: str, message: str) -> None:
        self.key = key
        super().__init__(message)


class RunConfig(BaseModel):
    """Resolved run configuration, in the units named by each key's suffix."""

    model_config = {"frozen": True, "extra": "forbid", "allow_inf_nan": False}

    # cavity-QD node
    g_ghz: float = Field(default=16.0, ge=0.0)
    kappa_ghz: float = Field(default=25.0, gt=0.0)
    gamma_qd_ghz: float = Field(default=1.0, gt=0.0)
    cavity_offset_ghz: float = 0.0
    delta_qd_ghz: float = 0.0
    qd_coupled: bool = True

    # atom
    gamma_a_mhz: float = Field(default=4.2, gt=0.0)
    gamma_r_mhz: float | None = Field(default=None, ge=0.0)
    lambda_nm: float = Field(default=935.0, gt=0.0)
    delta_a_ghz: float = 1.0

    # trap
    mass_amu: float = Field(default=171.0, gt=0.0)
    trap_omega_t_rad_per_s: float = Field(default=1e6, gt=0.0)
    nbar: float = Field(default=10.0, ge=0.0)
    eta_override: float | None = Field(default=0.09, ge=0.0)

    # collection optics
    delta_i_rad: float = Field(default=0.0, ge=0.0)
    delta_o_rad: float = Field(default=MAX_COLLECTION_ANGLE, gt=0.0)

    # pulse
    tau_ns: float = Field(default=1.0, gt=0.0)
    pulse_offset_ghz: float = 0.0
    amplitude: float = Field(default=1.0, ge=0.0)

    # link
    n_s: float = Field(default=0.1, ge=0.0)
    beta_enabled: bool = True
    n_ref: float | None = Field(default=None, ge=0.0)
    tau_mod_ns: float | None = Field(default=None, gt=0.0)

    # sweeps
    f_target: float = Field(default=0.9, gt=0.25, le=1.0)
    n_s_target: float = Field(default=0.1, gt=0.0)
    delta_max_rad: float = Field(default=MAX_COLLECTION_ANGLE, gt=0.0, le=MAX_COLLECTION_ANGLE)
    repetition_rate_mhz: float = Field(default=10.0, ge=0.0)
    qd_coherence_ns: float = Field(default=10.0, gt=0.0)
    fig3_delta_a_ghz: tuple[float, ...] = Field(default=(0.1, 1.0, 10.0), min_length=1)
    nbar_series: tuple[float, ...] = Field(default=(0.0, 10.0, 100.0, 1000.0), min_length=1)

    # numerics
    rel_tol: float = Field(default=1e-9, gt=0.0)
    abs_tol: float = Field(default=1e-14, ge=0.0)
    max_subdivisions: int = Field(default=10_000, ge=1)
    root_x_tol: float = Field(default=1e-8, gt=0.0)
    workers: int = Field(default=1, ge=1)

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    @model_validator(mode="after")
    def _cross_field(self) -> RunConfig:
        if self.gamma_r_mhz is not None and self.gamma_r_mhz > self.gamma_a_mhz:
            raise _KeyedValueError("gamma_r_mhz", "gamma_r must not exceed gamma_a")
        if self.delta_i_rad != 0.0:
            raise _KeyedValueError("delta_i_rad", "closed forms assume delta_i -> 0; only 0 is supported")
        if not self.delta_i_rad < self.delta_o_rad:
            raise _KeyedValueError("delta_i_rad", "inner collection angle must be below the outer one")
        if self.delta_o_rad > MAX_COLLECTION_ANGLE + 1e-15:
            raise _KeyedValueError("delta_o_rad", "collection half-angle cannot exceed pi/4")
        if any(s < 0.0 for s in self.nbar_series):
            raise _KeyedValueError("nbar_series", "nbar values must be non-negative")
        return self

    # ------------------------------------------------------------------
    # Domain objects (angular rad/ns)
    # ------------------------------------------------------------------

    def cavity(self) -> CavityQDParams:
        return CavityQDParams(
            g=ghz_to_angular(self.g_ghz),
            kappa=ghz_to_angular(self.kappa_ghz),
            gamma_qd=ghz_to_angular(self.gamma_qd_ghz),
            omega_c=ghz_to_angular(self.cavity_offset_ghz),
            delta_qd=ghz_to_angular(self.delta_qd_ghz),
            coupled=self.qd_coupled,
        )

    def atom(self) -> AtomParams:
        gamma_r = self.gamma_a_mhz if self.gamma_r_mhz is None else self.gamma_r_mhz
        return AtomParams(
            gamma_a=mhz_to_angular(self.gamma_a_mhz),
            gamma_r=mhz_to_angular(gamma_r),
            lambda0=self.lambda_nm * 1e-9,
            delta_a=ghz_to_angular(self.delta_a_ghz),
        )

    def trap(self) -> TrapState:
        return TrapState(mass=self.mass_amu * AMU, omega_t=self.trap_omega_t_rad_per_s, nbar=self.nbar)

    def geometry(self) -> CollectionGeometry:
        return CollectionGeometry(delta_i=self.delta_i_rad, delta_o=self.delta_o_rad)

    def pulse(self) -> PulseSpec:
        return PulseSpec(omega0=ghz_to_angular(self.pulse_offset_ghz), tau=self.tau_ns, amplitude=self.amplitude)

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(rel_tol=self.rel_tol, abs_tol=self.abs_tol, max_subdivisions=self.max_subdivisions)

    @property
    def eta(self) -> float:
        """Lamb-Dicke parameter: the override when set, otherwise from mass and trap frequency."""
        if self.eta_override is not None:
            return self.eta_override
        return lamb_dicke(self.trap(), self.lambda_nm * 1e-9)

    def scenario(self) -> LinkScenario:
        return LinkScenario(
            cavity=self.cavity(),
            atom=self.atom(),
            trap=self.trap(),
            geometry=self.geometry(),
            pulse=self.pulse(),
            eta=self.eta,
            n_s=self.n_s,
            beta_enabled=self.beta_enabled,
            n_ref=self.n_ref,
            tau_mod=self.tau_mod_ns,
            quad=self.quadrature(),
            root_x_tol=self.root_x_tol,
        )

    def constraints(self) -> SweepConstraints:
        return SweepConstraints(
            f_target=self.f_target,
            n_s_target=self.n_s_target,
            delta_max=self.delta_max_rad,
            repetition_rate_hz=self.repetition_rate_mhz * 1e6,
            qd_coherence_ns=self.qd_coherence_ns,
        )


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _key_lines(text: str) -> dict[str, int]:
    """Map each top-level key to its 1-based line, rejecting non-flat documents."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {exc}", line=mark.line + 1 if mark else None) from exc
    if root is None:
        return {}
    if not isinstance(root, yaml.MappingNode):
        raise ConfigError("config must be a mapping of key: value pairs", line=root.start_mark.line + 1)

    lines: dict[str, int] = {}
    for key_node, value_node in root.value:
        key = str(key_node.value)
        line = key_node.start_mark.line + 1
        if key in lines:
            raise ConfigError(f"duplicate key (first defined on line {lines[key]})", key=key, line=line)
        if isinstance(value_node, yaml.MappingNode):
            raise ConfigError("nested mappings are not supported", key=key, line=line)
        lines[key] = line
    return lines


def _to_config_error(exc: ValidationError, lines: dict[str, int]) -> ConfigError:
    first = exc.errors()[0]
    loc = first.get("loc", ())
    cause = first.get("ctx", {}).get("error")
    if isinstance(cause, _KeyedValueError):
        key: str | None = cause.key
        message = str(cause)
    else:
        key = str(loc[0]) if loc else None
        message = first["msg"]
    if first["type"] == "extra_forbidden":
        message = "unknown key"
    return ConfigError(message, key=key, line=lines.get(key) if key else None)


def parse_config(path: str | Path | None = None, *, text: str | None = None) -> RunConfig:
    """Load and validate a run configuration.

    Args:
        path: YAML file to read.  Ignored when ``text`` is given.
        text: Inline document.  With neither argument the defaults are used.

    Raises:
        ConfigError: Unreadable file, malformed YAML, unknown or duplicate
            key, non-finite value or violated invariant; the message names
            the key and its line.
    """
    source = "<inline>"
    if text is None and path is not None:
        source = str(path)
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc.strerror or exc}") from exc
    text = text or ""

    lines = _key_lines(text)
    raw: Any = yaml.safe_load(text) if lines else {}
    try:
        config = RunConfig.model_validate(raw or {})
    except ValidationError as exc:
        raise _to_config_error(exc, lines) from exc

    logger.info("Loaded config from %s: %d key(s) set, eta=%.4g", source, len(lines), config.eta)
    return config


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_SECTIONS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("cavity-QD node (GHz, ordinary frequency)",
     ("g_ghz", "kappa_ghz", "gamma_qd_ghz", "cavity_offset_ghz", "delta_qd_ghz", "qd_coupled")),
    ("atom (gamma_r_mhz: null means gamma_r = gamma_a)",
     ("gamma_a_mhz", "gamma_r_mhz", "lambda_nm", "delta_a_ghz")),
    ("trap (eta_override: null derives eta from mass and trap frequency)",
     ("mass_amu", "trap_omega_t_rad_per_s", "nbar", "eta_override")),
    ("collection optics (radians; delta_i_rad must be 0, delta_o_rad at most pi/4)", ("delta_i_rad", "delta_o_rad")),
    ("pulse", ("tau_ns", "pulse_offset_ghz", "amplitude")),
    ("link (null: n_ref = <|beta|^2>, tau_mod = cavity-modified QD lifetime)",
     ("n_s", "beta_enabled", "n_ref", "tau_mod_ns")),
    ("sweeps",
     ("f_target", "n_s_target", "delta_max_rad", "repetition_rate_mhz", "qd_coherence_ns",
      "fig3_delta_a_ghz", "nbar_series")),
    ("numerics", ("rel_tol", "abs_tol", "max_subdivisions", "root_x_tol", "workers")),
    ("logging: DEBUG, INFO, WARNING or ERROR", ("log_level",)),
)  # fmt: skip


def serialize_config(config: RunConfig) -> str:
    """Render ``config`` as the flat YAML document :func:`parse_config` reads back unchanged."""
    data = config.model_dump(mode="json")
    chunks = ["# hybrid-link run configuration\n"]
    for title, keys in _SECTIONS:
        section = {k: data[k] for k in keys}
        chunks.append(f"\n# {title}\n")
        chunks.append(yaml.safe_dump(section, sort_keys=False, default_flow_style=None))
    return "".join(chunks)
