import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rydgate.errors import ValidationError
from rydgate.gate import (
    HYPERFINE_SPLITTING,
    IDEAL_TRUTH_TABLES,
    INPUTS,
    GateConfig,
    absolute_optimum,
    auxiliary_errors,
    error_table,
    gate_time,
    golden_minimize,
    ladder_config,
    normalize_regime,
    numerical_optimum,
    optimize_large_dd,
    optimize_large_rabi,
    optimum_curve,
    reference_average,
    simulate_protocol,
    table_deviation,
)
from rydgate.trap import TrapConfig

from conftest import TWO_PI, rel

TAU = 100e-6
W = HYPERFINE_SPLITTING
LADDER = (0.1, 0.05, 0.025)


def mhz(x):
    return TWO_PI * x * 1e6


@pytest.fixture(scope="module")
def ladders():
    out = {}
    for regime in ("large_rabi", "large_dd"):
        rows = []
        for ratio in LADDER:
            cfg = ladder_config(regime, ratio)
            rows.append(table_deviation(simulate_protocol(cfg, seed=1), error_table(cfg)))
        out[regime] = rows
    return out


# --- configuration ---------------------------------------------------------------------------


def test_regime_names():
    assert normalize_regime("large-dd") == "large_dd"
    with pytest.raises(ValidationError):
        normalize_regime("medium")


def test_regime_defaults():
    rabi = GateConfig()
    dd = GateConfig(regime="large_dd")
    assert rabi.dd_shift == pytest.approx(mhz(1)) and dd.dd_shift == pytest.approx(mhz(100))
    assert rabi.rabi == dd.rabi == pytest.approx(mhz(10))


def test_nonpositive_parameters_rejected():
    with pytest.raises(ValidationError):
        GateConfig(lifetime=0.0)
    with pytest.raises(ValidationError):
        GateConfig(rabi=-1.0)


def test_out_of_band_parameters_warn():
    with pytest.warns(UserWarning):
        GateConfig(rabi=mhz(1), dd_shift=mhz(10), regime="large_rabi")
    with pytest.warns(UserWarning):
        GateConfig(rabi=mhz(100), dd_shift=mhz(10), regime="large_dd")


# --- error tables ----------------------------------------------------------------------------


def test_gate_times():
    assert gate_time("large_rabi", mhz(10), mhz(1)) == pytest.approx(2 * math.pi / mhz(10) + math.pi / mhz(1))
    assert gate_time("large_dd", mhz(10), mhz(100)) == pytest.approx(4 * math.pi / mhz(10))


def test_table_rows():
    O, D = mhz(100), mhz(5)
    b = error_table(GateConfig(O, D, TAU, W, "large_rabi"))
    assert b.rotation["aa"] == pytest.approx(2 * O**2 / W**2)
    assert b.rotation["bb"] == pytest.approx(8 * D**2 / O**2)
    O, D = mhz(10), mhz(300)
    b = error_table(GateConfig(O, D, TAU, W, "large_dd"))
    assert b.rotation["bb"] == pytest.approx(O**2 / (2 * D**2))
    assert b.decoherence["ba"] == pytest.approx(math.pi / (TAU * D) + math.pi / (TAU * O) * (1 + O**2 / W**2))


def test_decoherence_vanishes_with_infinite_lifetime():
    b = error_table(GateConfig(mhz(100), mhz(5), 1e30, W, "large_rabi"))
    assert max(b.decoherence.values()) < 1e-20


@given(st.floats(5, 500), st.floats(0.01, 0.5), st.floats(1e-5, 1e-3))
def test_large_dd_mean_equals_tabulated_average(dd_mhz, ratio, tau):
    cfg = GateConfig(mhz(dd_mhz) * ratio, mhz(dd_mhz), tau, W, "large_dd")
    b = error_table(cfg)
    assert b.average_decoherence == pytest.approx(b.reference_decoherence, rel=1e-12)
    assert b.average_rotation == pytest.approx(b.reference_rotation, rel=1e-12)


@given(st.floats(20, 1000), st.floats(0.01, 0.5), st.floats(1e-5, 1e-3))
def test_large_rabi_rotation_mean_equals_tabulated_average(rabi_mhz, ratio, tau):
    cfg = GateConfig(mhz(rabi_mhz), mhz(rabi_mhz) * ratio, tau, W, "large_rabi")
    b = error_table(cfg)
    assert b.average_rotation == pytest.approx(b.reference_rotation, rel=1e-12)
    assert all(v >= 0 for v in list(b.decoherence.values()) + list(b.rotation.values()))


def test_large_rabi_tabulated_decoherence_uses_quarter_coefficient():
    O, D = mhz(100), mhz(5)
    b = error_table(GateConfig(O, D, TAU, W, "large_rabi"))
    diff = b.average_decoherence - b.reference_decoherence
    assert diff == pytest.approx(math.pi * O / (TAU * W**2) * O / (4 * D))


def test_budget_records_include_average_rows():
    recs = error_table(GateConfig()).records()
    assert [r["input"] for r in recs] == list(INPUTS) + ["mean", "tabulated average"]


# --- optima ----------------------------------------------------------------------------------


def test_large_rabi_absolute_optimum():
    rabi, err = absolute_optimum("large_rabi")
    assert rel(rabi / TWO_PI, 183e6) < 0.05
    assert rel(err, 2.9e-3) < 0.05
    assert optimize_large_rabi(rabi).error == pytest.approx(err, rel=1e-9)


def test_large_dd_absolute_optimum():
    dd, err = absolute_optimum("large_dd")
    assert dd == pytest.approx(math.sqrt(3 / 14) * W)
    assert rel(dd / TWO_PI, 3160e6) < 0.05
    assert rel(err, 1.9e-4) < 0.05
    assert optimize_large_dd(dd).error == pytest.approx(err, rel=1e-9)


def test_large_rabi_second_term():
    O = mhz(100)
    expected = O**2 / W**2 + 3 / 2 ** (1 / 3) * (math.pi / (TAU * O)) ** (2 / 3)
    assert optimize_large_rabi(O).error == pytest.approx(expected)


def test_large_dd_leading_rabi():
    D = mhz(100)
    lead = (4 * math.pi * D**2 / TAU) ** (1 / 3)
    assert rel(optimize_large_dd(D).optimum, lead) < 1e-3


@pytest.mark.parametrize("rabi_mhz", [100, 183.3, 400, 1000])
def test_large_rabi_numerical_minimum_agrees(rabi_mhz):
    _, num = numerical_optimum("large_rabi", mhz(rabi_mhz))
    closed = optimize_large_rabi(mhz(rabi_mhz)).error
    assert rel(closed, num) < 0.02
    assert closed <= num * (1 + 1e-9)


@pytest.mark.parametrize("dd_mhz", [100, 300, 1000])
def test_large_dd_numerical_minimum_agrees(dd_mhz):
    _, num = numerical_optimum("large_dd", mhz(dd_mhz))
    assert rel(optimize_large_dd(mhz(dd_mhz)).error, num) < 0.02


@pytest.mark.xfail(strict=True, reason="at the absolute optimum the dropped higher orders make the closed form 10% high")
def test_large_dd_numerical_minimum_at_absolute_optimum():
    dd, _ = absolute_optimum("large_dd")
    _, num = numerical_optimum("large_dd", dd)
    assert rel(optimize_large_dd(dd).error, num) < 0.02


def test_golden_minimize_finds_log_parabola_minimum():
    x, f = golden_minimize(lambda x: (math.log(x) - 2.0) ** 2 + 1.0, math.exp(1.5))
    assert x == pytest.approx(math.exp(2.0), rel=1e-6) and f == pytest.approx(1.0)


def test_optimum_curve_shapes():
    xs = [mhz(x) for x in (50, 100, 200)]
    curve = optimum_curve("large_rabi", xs)
    assert curve.optimum.shape == (3,) and np.all(curve.error > 0)
    assert len(curve.records()) == 3


def test_large_dd_optimum_rejects_huge_shift():
    with pytest.raises(ValidationError):
        optimize_large_dd(1e6 * W)


# --- auxiliary errors ---------------------------------------------------------------------------


def test_auxiliary_errors_at_fifty_microns():
    aux = auxiliary_errors(GateConfig(), TrapConfig(), 50e-6)
    assert rel(aux.separation_error, 3.5e-4) < 0.10
    assert rel(aux.heating_power, 1.8) < 0.20  # K/s equals uK/us
    assert rel(aux.doppler_co, 3.3e-4) < 0.05
    assert rel(aux.doppler_counter, 1.9e-5) < 0.05


def test_separation_error_inverse_square():
    a = auxiliary_errors(GateConfig(), TrapConfig(), 50e-6).separation_error
    b = auxiliary_errors(GateConfig(), TrapConfig(), 100e-6).separation_error
    assert b == pytest.approx(a / 4)


def test_auxiliary_separation_validated():
    with pytest.raises(ValidationError):
        auxiliary_errors(GateConfig(), TrapConfig(), 0.0)


# --- protocol simulator ---------------------------------------------------------------------------


@pytest.mark.parametrize("regime", ["large_rabi", "large_dd"])
def test_ideal_limit_truth_tables(regime):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cfg = ladder_config(regime, 1e-3, lifetime=1e30)
    res = simulate_protocol(cfg, seed=3)
    assert res.truth_table == IDEAL_TRUTH_TABLES[regime]
    for s in INPUTS:
        assert abs(res.amplitudes[s].real - IDEAL_TRUTH_TABLES[regime][s]) < 1e-3


def test_large_rabi_doubly_excited_residual():
    cfg = GateConfig(mhz(100), mhz(5), 1e3, W, "large_rabi")
    res = simulate_protocol(cfg, seed=0)
    assert rel(res.rotation["bb"], 8 * 0.05**2) < 0.20


@pytest.mark.parametrize("column", ["rotation", "decoherence"])
@pytest.mark.parametrize("state", INPUTS)
def test_large_rabi_ladder_converges(ladders, state, column):
    devs = [row[(state, column)] for row in ladders["large_rabi"]]
    assert devs[0] > devs[1] > devs[2]


@pytest.mark.parametrize("key", [("ab", "rotation"), ("ab", "decoherence"),
                                 ("ba", "rotation"), ("bb", "rotation")])
def test_large_dd_ladder_converges(ladders, key):
    devs = [row[key] for row in ladders["large_dd"]]
    assert devs[0] >= devs[1] >= devs[2]
    assert devs[2] < 0.01


@pytest.mark.xfail(strict=True, reason="protocol and table differ by a constant factor for these entries")
@pytest.mark.parametrize("key", [("aa", "rotation"), ("aa", "decoherence"),
                                 ("ba", "decoherence"), ("bb", "decoherence")])
def test_large_dd_ladder_converges_structural(ladders, key):
    devs = [row[key] for row in ladders["large_dd"]]
    assert devs[0] > devs[1] > devs[2] and devs[2] < 0.05


@pytest.mark.xfail(strict=True, reason="the sequence leaves atom 1 in the Rydberg level for 3 pi/Omega, not pi/Delta + pi/Omega")
def test_large_dd_ba_decoherence_within_twenty_percent():
    cfg = ladder_config("large_dd", 0.025)
    res = simulate_protocol(cfg, seed=0)
    assert rel(res.decoherence["ba"], error_table(cfg).decoherence["ba"]) < 0.20


def test_large_dd_ba_decoherence_three_pulse_areas():
    cfg = ladder_config("large_dd", 0.025)
    res = simulate_protocol(cfg, seed=0)
    assert rel(res.decoherence["ba"], 3 * math.pi / (cfg.lifetime * cfg.rabi)) < 0.02


def test_simulation_deterministic_for_seed():
    cfg = ladder_config("large_rabi", 0.05)
    a, b = simulate_protocol(cfg, seed=11), simulate_protocol(cfg, seed=11)
    assert a.amplitudes == b.amplitudes and a.decoherence == b.decoherence


def test_simulation_sample_count_validated():
    with pytest.raises(ValidationError):
        simulate_protocol(GateConfig(), n_samples=0)


def test_ladder_ratio_validated():
    with pytest.raises(ValidationError):
        ladder_config("large_dd", 1.5)
