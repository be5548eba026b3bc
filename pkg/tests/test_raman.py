import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rydgate.budget import Budget
from rydgate.errors import ConfigurationError, NearResonanceError, ValidationError
from rydgate.raman import (
    RamanConfig,
    assemble_table2,
    crosstalk_error,
    fidelity,
    laser_noise_errors,
    motional_rotation_error,
    operations_before_heating,
    polarization_leakage,
    pulse_heating_bound,
    pulse_transition_probability,
    raman_rabi,
    rotation,
    rotation_angles,
    sample_stark_phase,
    single_qubit_budget,
    spont_emission_prob,
    stark_ledger,
    stark_phase_error,
)
from rydgate.trap import TrapConfig

from conftest import TWO_PI, rel

CFG = RamanConfig()
TRAP = TrapConfig()

# reference light shifts: state -> (mK, MHz)
LEDGER = {
    (1, -1): (-0.107, -2.41), (1, 0): (-0.213, 0.0), (1, 1): (-0.319, 2.42),
    (2, -2): (-0.458, -4.79), (2, -1): (-0.343, -2.39), (2, 0): (-0.228, 0.0),
    (2, 1): (-0.114, 2.38), (2, 2): (0.0, 4.75),
}

rabis = st.floats(-1e8, 1e8)
detunings = st.floats(-1e8, 1e8)
times = st.floats(0, 1e-5)


# --- Rabi frequency --------------------------------------------------------------------------


def test_raman_rabi_default():
    assert rel(raman_rabi(CFG) / TWO_PI, 4.6e6) < 0.10


def test_raman_rabi_vanishes_at_quarter_hyperfine_width():
    de = CFG.species.excited_hf_width
    assert raman_rabi(RamanConfig(detuning=de / 4)) == pytest.approx(0.0, abs=1e-9)


@given(st.floats(1e-6, 1e-2))
def test_raman_rabi_linear_in_intensity(power):
    assert raman_rabi(RamanConfig(beam_power=2 * power)) == pytest.approx(2 * raman_rabi(RamanConfig(beam_power=power)))


def test_raman_rabi_resonance_guard():
    with pytest.raises(NearResonanceError):
        raman_rabi(RamanConfig(detuning=TWO_PI * 10e6))


def test_raman_config_validation():
    with pytest.raises(ValidationError):
        RamanConfig(eps_10=0.2)
    with pytest.raises(ValidationError):
        RamanConfig(propagation="sideways")


# --- rotations -------------------------------------------------------------------------------


def test_rotation_at_zero_time_is_identity():
    assert np.allclose(rotation(1e6 + 2e5j, 3e5, 0.0).matrix, np.eye(2))


def test_resonant_pi_pulse():
    m = rotation(1e6, 0.0, math.pi / 1e6).matrix
    assert abs(m[0, 0]) < 1e-12 and abs(m[1, 1]) < 1e-12
    assert m[0, 1] == pytest.approx(1j)
    assert m[1, 0] == pytest.approx(1j)


@given(st.complex_numbers(max_magnitude=1e8), detunings, times)
def test_rotation_unitary(rabi, det, t):
    r = rotation(rabi, det, t)
    assert r.unitarity_defect() < 1e-10
    assert abs(abs(np.linalg.det(r.matrix)) - 1) < 1e-10


@given(rabis, detunings, times)
def test_transition_probability_matches_matrix(rabi, det, t):
    assert abs(rotation(rabi, det, t).transition_probability()
               - pulse_transition_probability(rabi, det, t)) < 1e-10


@given(st.complex_numbers(max_magnitude=1e7), st.floats(0, 1e-6), st.floats(0, 1e-6))
def test_resonant_rotation_semigroup(rabi, t1, t2):
    # the detuned matrix carries frame phases, so composition is only a group on resonance
    lhs = (rotation(rabi, 0.0, t1) @ rotation(rabi, 0.0, t2)).matrix
    assert np.allclose(lhs, rotation(rabi, 0.0, t1 + t2).matrix, atol=1e-10, rtol=0)


# --- fidelity --------------------------------------------------------------------------------


def test_fidelity_of_identical_rotations():
    r = rotation(1e6 + 1e6j, 2e5, 1e-6)
    assert fidelity(r, r) == pytest.approx(1.0)


@given(st.floats(0, 2 * math.pi), st.floats(-math.pi, math.pi))
def test_half_pi_fidelity_formula(theta, phi):
    f = fidelity(rotation_angles(theta, phi), rotation_angles(math.pi / 2, 0.0))
    assert f == pytest.approx(0.5 * (1 + math.cos(phi) * math.sin(theta)), abs=1e-12)


@given(st.floats(0, 2 * math.pi))
def test_pi_fidelity_formula(theta):
    f = fidelity(rotation_angles(theta, 0.0), rotation_angles(math.pi, 0.0))
    assert f == pytest.approx(0.5 * (1 - math.cos(theta)), abs=1e-12)


@given(st.complex_numbers(max_magnitude=1e7), detunings, times, st.complex_numbers(max_magnitude=1))
def test_fidelity_in_unit_interval(rabi, det, t, psi):
    f = fidelity(rotation(rabi, det, t), rotation_angles(math.pi / 2, 0.0), (1.0, psi))
    assert 0.0 <= f <= 1.0


def test_fidelity_needs_samples():
    with pytest.raises(ValidationError):
        fidelity([], rotation_angles(1.0, 0.0))


# --- spontaneous emission -----------------------------------------------------------------------


def test_spontaneous_emission_default():
    assert rel(spont_emission_prob(CFG.detuning, 27.7e-9), 9e-5) < 0.10


@given(st.floats(1e9, 1e13))
def test_spontaneous_emission_inverse_in_detuning(det):
    assert spont_emission_prob(2 * det, 27.7e-9) == pytest.approx(spont_emission_prob(det, 27.7e-9) / 2)


def test_spontaneous_emission_vanishes_for_stable_level():
    assert spont_emission_prob(CFG.detuning, math.inf) == 0.0


# --- light-shift ledger ----------------------------------------------------------------------------


@pytest.mark.parametrize("state", list(LEDGER))
def test_ledger_millikelvin_column(state):
    shift_mk = stark_ledger(CFG).shift(*state) * 1e3
    expected = LEDGER[state][0]
    if expected == 0:
        assert shift_mk == 0.0
    else:
        assert rel(shift_mk, expected) < 0.05


@pytest.mark.parametrize("state", [s for s in LEDGER if s[0] == 2 and s[1] != 0])
def test_ledger_megahertz_column_upper_manifold(state):
    assert rel(stark_ledger(CFG).row(*state).differential_mhz, LEDGER[state][1]) < 0.05


@pytest.mark.xfail(strict=True, reason="reference lower-manifold MHz values disagree in sign and by 9% with the mK values")
@pytest.mark.parametrize("state", [(1, -1), (1, 1)])
def test_ledger_megahertz_column_lower_manifold(state):
    assert rel(stark_ledger(CFG).row(*state).differential_mhz, LEDGER[state][1]) < 0.05


def test_ledger_lower_manifold_consistent_with_millikelvin():
    led = stark_ledger(CFG)
    hz_per_mk = 1e-3 * 1.380649e-23 / 6.62607015e-34 / 1e6
    for m in (-1, 1):
        expected = (led.shift(1, m) - led.shift(1, 0)) * 1e3 * hz_per_mk
        assert led.row(1, m).differential_mhz == pytest.approx(expected, rel=1e-9)


def test_ledger_reference_rows_zero():
    led = stark_ledger(CFG)
    assert led.row(1, 0).differential_mhz == 0.0
    assert led.row(2, 0).differential_mhz == 0.0
    assert led.shift(2, 2) == 0.0


# --- motion and heating ---------------------------------------------------------------------------


def test_pulse_heating_bound():
    assert rel(pulse_heating_bound(CFG, TRAP, TWO_PI * 4.6e6), 70e-9) < 0.20


def test_pulse_heating_scales_with_trap_over_rabi():
    a = pulse_heating_bound(CFG, TRAP, TWO_PI * 4.6e6)
    assert pulse_heating_bound(CFG, TRAP, TWO_PI * 9.2e6) == pytest.approx(a / 2)


def test_operations_before_heating_order_thousand():
    assert 300 < operations_before_heating(CFG, TRAP) < 3000


def test_stark_phase_default():
    res = stark_phase_error(CFG, TRAP)
    assert rel(res.mean_phase, 0.1) < 0.10
    assert rel(res.error, 4.4e-7) < 0.10


def test_stark_phase_variance_vanishes_when_cold():
    cold = TrapConfig(temperature=1e-12)
    assert stark_phase_error(CFG, cold).phase_variance == pytest.approx(0.0, abs=1e-20)


def test_stark_phase_monte_carlo_oracle():
    res = stark_phase_error(CFG, TRAP)
    n = 100_000
    phases = sample_stark_phase(CFG, TRAP, n, seed=7)
    mean_err = phases.std(ddof=1) / math.sqrt(n)
    assert abs(phases.mean() - res.mean_phase) < 3 * mean_err
    var = phases.var(ddof=1)
    var_err = math.sqrt((np.mean((phases - phases.mean()) ** 4) - var**2) / n)
    assert abs(var - res.phase_variance) < 3 * var_err


def test_stark_phase_series_close_to_exact():
    res = stark_phase_error(CFG, TRAP)
    assert rel(res.series_mean, res.mean_phase) < 0.01


def test_motional_error_default():
    res = motional_rotation_error(CFG, TRAP)
    assert rel(res.error, 9.4e-5) < 0.10
    assert rel(res.doppler_variance, 3e-13) < 0.10


def test_motional_error_scaling():
    base = motional_rotation_error(CFG, TRAP).area_variance
    hot = motional_rotation_error(CFG, TrapConfig(temperature=100e-6)).area_variance
    wide = motional_rotation_error(RamanConfig(waist=10e-6), TRAP).area_variance
    assert hot == pytest.approx(4 * base)
    assert wide == pytest.approx(base / 16)


def test_crosstalk():
    assert rel(crosstalk_error(5e-6, 8e-6), 2.2e-5) < 0.02
    assert crosstalk_error(5e-6, 0.0) == pytest.approx(math.pi**2 / 16)
    assert crosstalk_error(5e-6, 1.0) == 0.0


# --- polarization leakage ------------------------------------------------------------------------------


def test_leakage_default_impurity_and_amplitudes():
    res = polarization_leakage(CFG, TRAP)
    assert res.max_amplitude == pytest.approx(6.6e-3, rel=0.10)
    big = max(res.channels, key=lambda c: abs(c.amplitude))
    assert big.initial == (2, 0) and big.target in {(2, 1), (2, -1)}


@pytest.mark.xfail(strict=True, reason="first-order amplitudes at the shifted resonances give 1.10e-4 from |b>")
def test_leakage_probability_from_b():
    assert rel(polarization_leakage(CFG, TRAP).probability_b, 9.4e-5) < 0.10


def test_leakage_frozen_value():
    assert polarization_leakage(CFG, TRAP).probability_b == pytest.approx(1.10332e-4, rel=1e-4)


def test_leakage_vanishes_for_pure_polarization():
    pure = RamanConfig(eps_1m=0.0, eps_10=0.0, eps_2m=0.0, eps_20=0.0)
    res = polarization_leakage(pure, TRAP)
    assert res.max_amplitude == 0.0 and res.decoherence == 0.0


def test_leakage_needs_resonant_drive():
    with pytest.raises(ConfigurationError):
        polarization_leakage(RamanConfig(two_photon_detuning=1e3), TRAP)


# --- laser noise ----------------------------------------------------------------------------------------


def test_laser_noise_default():
    res = laser_noise_errors(CFG)
    assert rel(res.limited_intensity_error, 9.4e-8) < 0.10
    assert rel(res.phase_error, 2.5e-7) < 0.02
    assert res.shot_noise_floor >= 1e-4


def test_laser_noise_zero():
    res = laser_noise_errors(RamanConfig(intensity_noise=0.0, phase_noise=0.0))
    assert res.intensity_error == 0.0 and res.phase_error == 0.0


# --- budget ---------------------------------------------------------------------------------------------


def test_reference_rows_sum():
    rows = {"a": ("decoherence", 9e-5, ""), "b": ("decoherence", 9.7e-5, ""),
            "c": ("error", 4.4e-7, ""), "d": ("error", 9.4e-5, ""), "e": ("error", 2.2e-5, ""),
            "f": ("error", 9.4e-8, ""), "g": ("error", 2.5e-7, "")}
    b = assemble_table2(rows)
    assert b.combined("decoherence") == pytest.approx(1.87e-4)
    assert b.combined("error") == pytest.approx(1.17e-4, rel=0.01)


def test_empty_and_single_row_budgets():
    assert assemble_table2({}).combined("error") == 0.0
    assert Budget().add("x", "error", 3e-5).combined("error") == 3e-5


def test_single_qubit_budget_error_sum():
    assert rel(single_qubit_budget(CFG, TRAP).combined("error"), 1.2e-4) < 0.05


def test_matrix_and_rabi_formula_agree_on_random_grid():
    rng = np.random.default_rng(2024)
    worst_p = worst_u = 0.0
    for _ in range(1000):
        rabi = rng.uniform(0, 2e7) * np.exp(1j * rng.uniform(0, TWO_PI))
        det = rng.uniform(-2e7, 2e7)
        t = rng.uniform(0, 2e-6)
        r = rotation(rabi, det, t)
        worst_p = max(worst_p, abs(r.transition_probability() - pulse_transition_probability(abs(rabi), det, t)))
        worst_u = max(worst_u, r.unitarity_defect())
    assert worst_p < 1e-10 and worst_u < 1e-10
