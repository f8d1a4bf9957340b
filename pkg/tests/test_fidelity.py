"""Tests for hybrid_link.fidelity - spectral and closed-form fidelities."""

from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import trapezoid

from hybrid_link.constants import ghz_to_angular, mhz_to_angular
from hybrid_link.errors import DomainError, InfeasibleError
from hybrid_link.fidelity import (
    RecoilScenario,
    SpectralScenario,
    Verdict,
    branch_amplitudes,
    collection_efficiency,
    entanglement_rate,
    integration_window,
    lamb_dicke_regime,
    monochromatic_fidelity,
    multiphoton_fidelity,
    n_s_for_fidelity,
    pulse_spectrum,
    q_factor,
    recoil_fidelity,
    spectral_fidelity,
    success_probability,
    thermal_beta_moments,
    weak_excitation_check,
)
from hybrid_link.models import AtomParams, CavityQDParams, PulseSpec

QUARTER_PI = math.pi / 4
GAMMA_A = mhz_to_angular(4.2)


def _spectral(tau: float, delta_a_ghz: float, **kwargs: object) -> SpectralScenario:
    cavity = CavityQDParams(
        g=ghz_to_angular(16.0),
        kappa=ghz_to_angular(25.0),
        gamma_qd=ghz_to_angular(1.0),
        delta_qd=float(kwargs.pop("delta_qd", 0.0)),  # type: ignore[arg-type]
        coupled=bool(kwargs.pop("coupled", True)),
    )
    atom = AtomParams(gamma_a=GAMMA_A, gamma_r=GAMMA_A, lambda0=935e-9, delta_a=ghz_to_angular(delta_a_ghz))
    return SpectralScenario(pulse=PulseSpec(tau=tau), cavity=cavity, atom=atom, **kwargs)  # type: ignore[arg-type]


def _trapezoid_fidelity(s: SpectralScenario, n_points: int = 200_001) -> float:
    lo, hi, _ = integration_window(s)
    omega = np.linspace(lo, hi, n_points)
    alpha, beta = branch_amplitudes(omega, s)
    numerator = trapezoid(np.abs(alpha + beta) ** 2, omega)
    denominator = trapezoid(np.abs(alpha) ** 2 + np.abs(beta) ** 2 - np.real(np.conj(alpha) * beta), omega)
    return float(0.25 * numerator / denominator)


# -----------------------------------------------------------------------
# Single-frequency fidelity
# -----------------------------------------------------------------------


class TestMonochromaticFidelity:
    def test_matched_branches_give_singlet(self) -> None:
        assert monochromatic_fidelity(0.7 + 0.2j, 0.7 + 0.2j) == pytest.approx(1.0)

    def test_missing_branch_gives_quarter(self) -> None:
        assert monochromatic_fidelity(1.0 + 0j, 0j) == pytest.approx(0.25)

    def test_opposite_branches_give_zero(self) -> None:
        assert monochromatic_fidelity(1.0 + 0j, -1.0 + 0j) == pytest.approx(0.0)

    def test_quadrature_branches(self) -> None:
        assert monochromatic_fidelity(1.0 + 0j, 1j) == pytest.approx(0.25)

    def test_both_zero_rejected(self) -> None:
        with pytest.raises(DomainError):
            monochromatic_fidelity(0j, 0j)


# -----------------------------------------------------------------------
# Spectral fidelity
# -----------------------------------------------------------------------


class TestPulseSpectrum:
    def test_peak(self) -> None:
        assert pulse_spectrum(0.0, PulseSpec(tau=2.0, amplitude=3.0)) == pytest.approx(3.0)

    def test_one_over_e_point(self) -> None:
        p = PulseSpec(tau=2.0)
        assert abs(pulse_spectrum(2.0 / p.tau, p)) == pytest.approx(math.exp(-1.0))


class TestSpectralScenario:
    def test_matching_frequency_outside_window_rejected(self) -> None:
        with pytest.raises(ValidationError):
            _spectral(1.0, 1.0, matching_frequency=100.0)

    def test_window_holds_atomic_breakpoint(self) -> None:
        s = _spectral(1.0, 1.0)
        lo, hi, points = integration_window(s)
        assert (lo, hi) == (-40.0, 40.0)
        assert -ghz_to_angular(1.0) in points
        assert 0.0 in points

    def test_far_atomic_line_not_a_breakpoint(self) -> None:
        s = _spectral(100.0, 10.0)
        _, _, points = integration_window(s)
        assert points == (0.0,)

    def test_branches_matched_at_line_center(self) -> None:
        alpha, beta = branch_amplitudes(0.0, _spectral(1.0, 1.0))
        assert alpha == pytest.approx(1.0)
        assert beta == pytest.approx(1.0)


class TestSpectralFidelity:
    def test_disabled_atom_branch_gives_quarter(self) -> None:
        assert spectral_fidelity(_spectral(1.0, 1.0, beta_enabled=False)) == pytest.approx(0.25, abs=1e-12)

    def test_zero_amplitude_rejected(self) -> None:
        s = _spectral(1.0, 1.0)
        s = s.model_copy(update={"pulse": PulseSpec(tau=1.0, amplitude=0.0)})
        with pytest.raises(DomainError):
            spectral_fidelity(s)

    @pytest.mark.parametrize("delta_a_ghz", [0.1, 1.0, 10.0])
    def test_long_pulse_limit(self, delta_a_ghz: float) -> None:
        assert spectral_fidelity(_spectral(100.0, delta_a_ghz)) >= 0.99

    @pytest.mark.parametrize("delta_a_ghz", [0.1, 1.0, 10.0])
    def test_short_pulse_limit(self, delta_a_ghz: float) -> None:
        assert spectral_fidelity(_spectral(0.01, delta_a_ghz)) <= 0.30

    @pytest.mark.parametrize(
        ("tau", "delta_a_ghz", "extra"),
        [
            (1.0, 1.0, {}),
            (10.0, 0.1, {}),
            (0.1, 10.0, {"delta_qd": ghz_to_angular(5.0)}),
        ],
    )
    def test_matches_dense_trapezoid(self, tau: float, delta_a_ghz: float, extra: dict[str, float]) -> None:
        s = _spectral(tau, delta_a_ghz, **extra)
        assert spectral_fidelity(s) == pytest.approx(_trapezoid_fidelity(s), abs=1e-6)

    def test_confined_to_physical_range(self) -> None:
        rng = np.random.default_rng(7)
        for _ in range(20):
            tau = float(10.0 ** rng.uniform(-2.0, 2.0))
            delta_a = float(10.0 ** rng.uniform(-1.5, 1.5))
            f = spectral_fidelity(_spectral(tau, delta_a))
            assert 0.25 - 1e-9 <= f <= 1.0 + 1e-9

    def test_longer_pulses_raise_fidelity(self) -> None:
        fidelities = [spectral_fidelity(_spectral(tau, 1.0)) for tau in (0.3, 1.0, 3.0, 10.0)]
        assert all(b >= a - 1e-6 for a, b in zip(fidelities, fidelities[1:], strict=False))

    @pytest.mark.parametrize("delta_a_ghz", [0.1, 1.0, 10.0])
    def test_nondecreasing_over_log_duration_grid(self, delta_a_ghz: float) -> None:
        taus = np.geomspace(0.01, 100.0, 60)
        fidelities = [spectral_fidelity(_spectral(float(tau), delta_a_ghz)) for tau in taus]
        assert all(0.25 - 1e-9 <= f <= 1.0 + 1e-9 for f in fidelities)
        assert all(b >= a - 1e-8 for a, b in zip(fidelities, fidelities[1:], strict=False))

    @pytest.mark.parametrize("amplitude", [0.05, 3.0, 250.0])
    def test_invariant_under_pulse_amplitude(self, amplitude: float) -> None:
        s = _spectral(2.0, 1.0)
        scaled = s.model_copy(update={"pulse": PulseSpec(tau=2.0, amplitude=amplitude)})
        assert spectral_fidelity(scaled) == pytest.approx(spectral_fidelity(s), rel=1e-8)

    def test_invariant_under_common_phase(self) -> None:
        s = _spectral(3.0, 0.1)
        alpha, beta = branch_amplitudes(np.linspace(-1.0, 1.0, 21), s)
        for phi in (0.3, 1.7, -2.9):
            rotation = complex(np.exp(1j * phi))
            for a, b in zip(alpha, beta, strict=True):
                rotated = monochromatic_fidelity(complex(a) * rotation, complex(b) * rotation)
                assert rotated == pytest.approx(monochromatic_fidelity(complex(a), complex(b)), abs=1e-12)


# -----------------------------------------------------------------------
# Recoil and multi-photon closed forms
# -----------------------------------------------------------------------


class TestQFactor:
    def test_zero(self) -> None:
        assert q_factor(0.0) == 1.0

    def test_reference_point(self) -> None:
        assert q_factor(0.0549614) == pytest.approx(0.9730159, abs=1e-7)

    def test_series_branch_is_continuous(self) -> None:
        assert q_factor(0.999999e-6) == pytest.approx(q_factor(1.000001e-6), rel=1e-11)

    def test_large_argument(self) -> None:
        assert q_factor(50.0) == pytest.approx(1.0 / 50.0)

    def test_negative_rejected(self) -> None:
        with pytest.raises(DomainError):
            q_factor(-0.1)


class TestRecoilFidelity:
    def test_reference_point(self) -> None:
        r = RecoilScenario(eta=0.09, nbar=10, delta=QUARTER_PI)
        assert r.recoil_exponent == pytest.approx(0.0549614, rel=1e-6)
        assert recoil_fidelity(r) == pytest.approx(0.9606, abs=1e-3)
        assert recoil_fidelity(r) > 0.9

    def test_paraxial_limit_is_perfect(self) -> None:
        r = RecoilScenario(eta=0.09, nbar=10, delta=1e-9)
        assert recoil_fidelity(r) == pytest.approx(1.0, abs=1e-12)

    def test_hotter_ion_lowers_fidelity(self) -> None:
        cold = recoil_fidelity(RecoilScenario(eta=0.09, nbar=0, delta=QUARTER_PI))
        hot = recoil_fidelity(RecoilScenario(eta=0.09, nbar=100, delta=QUARTER_PI))
        assert hot < cold

    def test_nonincreasing_in_collection_angle(self) -> None:
        rng = np.random.default_rng(21)
        h = 1e-6
        for _ in range(200):
            eta, nbar = float(rng.uniform(0.0, 0.3)), float(rng.uniform(0.0, 1000.0))
            delta = float(rng.uniform(0.01, QUARTER_PI - 1e-3))
            lower = recoil_fidelity(RecoilScenario(eta=eta, nbar=nbar, delta=delta - h))
            upper = recoil_fidelity(RecoilScenario(eta=eta, nbar=nbar, delta=delta + h))
            assert (upper - lower) / (2.0 * h) <= 1e-9

    def test_angle_beyond_45_degrees_rejected(self) -> None:
        with pytest.raises(ValidationError):
            RecoilScenario(eta=0.09, nbar=0, delta=1.0)

    def test_thermal_moments(self) -> None:
        r = RecoilScenario(eta=0.09, nbar=10, delta=QUARTER_PI, n_s=0.5)
        mean, mean_sq = thermal_beta_moments(r)
        assert mean_sq == pytest.approx(3.0 / 8.0 * 0.5 * QUARTER_PI**2)
        assert mean.real == pytest.approx(-math.sqrt(mean_sq) * q_factor(r.recoil_exponent))
        assert mean.imag == 0.0


class TestMultiphotonFidelity:
    def test_reduces_to_recoil_without_scattering(self) -> None:
        r = RecoilScenario(eta=0.09, nbar=10, delta=QUARTER_PI, n_s=0.0)
        assert multiphoton_fidelity(r) == pytest.approx(recoil_fidelity(r))

    def test_decreases_with_photon_number(self) -> None:
        values = [multiphoton_fidelity(RecoilScenario(eta=0.09, nbar=10, delta=0.5, n_s=n)) for n in (0, 0.5, 2, 10)]
        assert values == sorted(values, reverse=True)

    def test_nonincreasing_in_collection_angle(self) -> None:
        rng = np.random.default_rng(22)
        h = 1e-6
        for _ in range(200):
            eta, nbar = float(rng.uniform(0.0, 0.3)), float(rng.uniform(0.0, 1000.0))
            delta, n_s = float(rng.uniform(0.01, QUARTER_PI - 1e-3)), float(rng.uniform(0.0, 10.0))
            lower = multiphoton_fidelity(RecoilScenario(eta=eta, nbar=nbar, delta=delta - h, n_s=n_s))
            upper = multiphoton_fidelity(RecoilScenario(eta=eta, nbar=nbar, delta=delta + h, n_s=n_s))
            assert (upper - lower) / (2.0 * h) <= 1e-9

    def test_derivative_matches_finite_difference(self) -> None:
        rng = np.random.default_rng(11)
        h = 1e-6
        for _ in range(100):
            eta, nbar = float(rng.uniform(0.0, 0.3)), float(rng.uniform(0.0, 100.0))
            delta, n_s = float(rng.uniform(0.05, QUARTER_PI)), float(rng.uniform(0.0, 5.0))
            q = q_factor(eta**2 * (nbar + 1.0) * delta**2)
            analytic = -0.25 * math.exp(-(n_s + h) / 2.0) * q / (2.0 - q)

            def f(n: float, eta: float = eta, nbar: float = nbar, delta: float = delta) -> float:
                return multiphoton_fidelity(RecoilScenario(eta=eta, nbar=nbar, delta=delta, n_s=n))

            numeric = (f(n_s + 2.0 * h) - f(n_s)) / (2.0 * h)
            assert numeric == pytest.approx(analytic, rel=1e-4)


class TestSuccessProbability:
    def test_reference_point(self) -> None:
        r = RecoilScenario(eta=0.09, nbar=10, delta=QUARTER_PI, n_s=0.273596)
        assert success_probability(r) == pytest.approx(0.0157, abs=5e-4)

    def test_no_scattering_no_success(self) -> None:
        assert success_probability(RecoilScenario(eta=0.09, nbar=0, delta=0.5)) == 0.0

    def test_derivative_matches_finite_difference(self) -> None:
        rng = np.random.default_rng(12)
        h = 1e-6
        for _ in range(100):
            delta, n_s = float(rng.uniform(0.05, QUARTER_PI)), float(rng.uniform(0.0, 50.0))
            k = 3.0 * delta**2 / 32.0
            analytic = k * math.exp(-k * (n_s + h))

            def p(n: float, delta: float = delta) -> float:
                return success_probability(RecoilScenario(eta=0.09, nbar=1, delta=delta, n_s=n))

            numeric = (p(n_s + 2.0 * h) - p(n_s)) / (2.0 * h)
            assert numeric == pytest.approx(analytic, rel=1e-4)


class TestNsForFidelity:
    def test_reference_point(self) -> None:
        assert n_s_for_fidelity(0.9, 0.09, 10, QUARTER_PI) == pytest.approx(0.273596, rel=1e-4)

    def test_round_trip(self) -> None:
        rng = np.random.default_rng(3)
        checked = 0
        while checked < 200:
            eta, nbar = float(rng.uniform(0.0, 0.2)), float(rng.uniform(0.0, 50.0))
            delta, f_target = float(rng.uniform(0.01, QUARTER_PI)), float(rng.uniform(0.5, 0.99))
            try:
                n_s = n_s_for_fidelity(f_target, eta, nbar, delta)
            except InfeasibleError:
                continue
            r = RecoilScenario(eta=eta, nbar=nbar, delta=delta, n_s=n_s)
            assert multiphoton_fidelity(r) == pytest.approx(f_target, abs=1e-10)
            checked += 1

    def test_target_above_recoil_limit(self) -> None:
        with pytest.raises(InfeasibleError) as exc_info:
            n_s_for_fidelity(0.97, 0.09, 10, QUARTER_PI)
        assert exc_info.value.diagnostic["f_max"] == pytest.approx(0.96059, abs=1e-5)

    def test_target_below_multiphoton_floor(self) -> None:
        with pytest.raises(InfeasibleError):
            n_s_for_fidelity(0.3, 0.09, 10, QUARTER_PI)

    def test_target_at_recoil_limit_needs_no_photons(self) -> None:
        f_max = recoil_fidelity(RecoilScenario(eta=0.09, nbar=10, delta=QUARTER_PI))
        assert n_s_for_fidelity(f_max, 0.09, 10, QUARTER_PI) == pytest.approx(0.0, abs=1e-9)


# -----------------------------------------------------------------------
# Auxiliary figures of merit
# -----------------------------------------------------------------------


class TestAuxiliaryFigures:
    def test_collection_efficiency_at_45_degrees(self) -> None:
        assert collection_efficiency(QUARTER_PI) == pytest.approx(0.2313, abs=1e-4)

    def test_collection_efficiency_domain(self) -> None:
        with pytest.raises(DomainError):
            collection_efficiency(1.0)

    def test_lamb_dicke_regime(self) -> None:
        assert lamb_dicke_regime(0.09, 10)
        assert not lamb_dicke_regime(0.09, 12)
        assert lamb_dicke_regime(0.0, 1e6)

    def test_entanglement_rate(self) -> None:
        assert entanglement_rate(0.01, 1e7) == pytest.approx(1e5)

    def test_entanglement_rate_domain(self) -> None:
        with pytest.raises(DomainError):
            entanglement_rate(1.5, 1e7)


# -----------------------------------------------------------------------
# Weak-excitation check
# -----------------------------------------------------------------------


class TestWeakExcitationCheck:
    def test_reference_atom_ratio_warns(self) -> None:
        report = weak_excitation_check(0.1, 10.0, GAMMA_A, n_ref=0.01, tau_p=10.0, tau_mod=0.004)
        assert report.atom_ratio == pytest.approx(0.379, abs=1e-3)
        assert report.atom_verdict is Verdict.WARN
        assert not report.failed

    def test_fewer_photons_pass(self) -> None:
        report = weak_excitation_check(0.01, 10.0, GAMMA_A, n_ref=0.01, tau_p=10.0, tau_mod=0.004)
        assert report.atom_verdict is Verdict.PASS

    def test_qd_ratio(self) -> None:
        report = weak_excitation_check(0.01, 10.0, GAMMA_A, n_ref=0.01, tau_p=10.0, tau_mod=1.0)
        assert report.qd_ratio == pytest.approx(0.001)
        assert report.qd_verdict is Verdict.PASS

    def test_strong_drive_fails(self) -> None:
        report = weak_excitation_check(5.0, 1.0, GAMMA_A, n_ref=0.01, tau_p=1.0, tau_mod=0.004)
        assert report.atom_verdict is Verdict.FAIL
        assert report.failed

    @pytest.mark.parametrize(("ratio", "verdict"), [(0.0999, Verdict.PASS), (0.1, Verdict.WARN), (1.0, Verdict.FAIL)])
    def test_verdict_thresholds(self, ratio: float, verdict: Verdict) -> None:
        assert Verdict.for_ratio(ratio) is verdict

    def test_non_positive_duration_rejected(self) -> None:
        with pytest.raises(DomainError):
            weak_excitation_check(0.1, 0.0, GAMMA_A, n_ref=0.01, tau_p=1.0, tau_mod=0.004)
