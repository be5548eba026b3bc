import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rydgate.config import ConfigParseError, RunConfig, env_overrides, load_config
from rydgate.errors import ConfigurationError, ValidationError
from rydgate.trap import NoiseSpectrum


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_empty_file_gives_defaults(tmp_path):
    cfg = load_config(write(tmp_path, "c.toml", ""), environ={})
    assert cfg.trap.trap_depth == pytest.approx(-1e-3)
    assert cfg.trap.temperature == pytest.approx(50e-6)
    assert cfg.trap.wavelength == pytest.approx(1.01e-6)
    assert cfg.trap.waist == pytest.approx(2.5e-6)
    assert cfg.raman.waist == pytest.approx(5e-6)
    assert cfg == RunConfig()


def test_empty_json_gives_defaults(tmp_path):
    assert load_config(write(tmp_path, "c.json", ""), environ={}) == RunConfig()


def test_toml_values_applied(tmp_path):
    text = '[trap]\ntemperature = 1e-4\npressure_mbar = 2e-10\n[gate]\nregime = "large-dd"\n[run]\nseed = 5\n'
    cfg = load_config(write(tmp_path, "c.toml", text), environ={})
    assert cfg.trap.temperature == 1e-4 and cfg.trap.pressure_mbar == 2e-10
    assert cfg.gate.regime == "large_dd" and cfg.run.seed == 5


def test_json_values_applied(tmp_path):
    doc = {"readout": {"background_rate": 1000}, "raman": {"eps_1m": [0.01, 0.002]}}
    cfg = load_config(write(tmp_path, "c.json", json.dumps(doc)), environ={})
    assert cfg.readout.background_rate == 1000.0
    assert cfg.raman.eps_1m == complex(0.01, 0.002)


def test_noise_table(tmp_path):
    text = '[trap]\nintensity_noise = {edges = [0, 1e3, "inf"], values = [1e-12, 1e-13]}\n'
    cfg = load_config(write(tmp_path, "c.toml", text), environ={})
    assert cfg.trap.intensity_noise == NoiseSpectrum((0.0, 1e3, math.inf), (1e-12, 1e-13))


def test_negative_pressure_rejected(tmp_path):
    with pytest.raises(ValidationError):
        load_config(write(tmp_path, "c.toml", "[trap]\npressure_mbar = -1e-10\n"), environ={})


def test_unknown_key_named(tmp_path):
    with pytest.raises(ValidationError, match="foo"):
        load_config(write(tmp_path, "c.toml", "[trap]\nfoo = 1\n"), environ={})


def test_unknown_section_named(tmp_path):
    with pytest.raises(ValidationError, match="laser"):
        load_config(write(tmp_path, "c.toml", "[laser]\npower = 1\n"), environ={})


@pytest.mark.parametrize("text", ['[trap]\ntemperature = "hot"\n', "[run]\nseed = 1.5\n",
                                  "[run]\nplots = 1\n", "[run]\nn_samples = 0\n"])
def test_type_errors(tmp_path, text):
    with pytest.raises(ValidationError):
        load_config(write(tmp_path, "c.toml", text), environ={})


def test_parse_error_carries_position(tmp_path):
    with pytest.raises(ConfigParseError) as info:
        load_config(write(tmp_path, "c.toml", "[trap]\ntemperature = = 3\n"), environ={})
    assert info.value.line == 2 and info.value.column > 0


def test_json_parse_error_position(tmp_path):
    with pytest.raises(ConfigParseError) as info:
        load_config(write(tmp_path, "c.json", '{"trap": {\n  "temperature": ,}}'), environ={})
    assert info.value.line == 2


def test_missing_file():
    with pytest.raises(ConfigurationError):
        load_config("/nonexistent/config.toml", environ={})


def test_environment_overrides_file(tmp_path):
    path = write(tmp_path, "c.toml", "[trap]\npressure_mbar = 1e-10\n")
    cfg = load_config(path, environ={"RYDGATE_TRAP_PRESSURE_MBAR": "2e-10", "RYDGATE_RUN_SEED": "7"})
    assert cfg.trap.pressure_mbar == 2e-10 and cfg.run.seed == 7


def test_explicit_overrides_beat_environment():
    cfg = load_config(environ={"RYDGATE_RUN_SEED": "7"}, overrides={"run": {"seed": 9}})
    assert cfg.run.seed == 9


def test_bad_environment_name():
    with pytest.raises(ValidationError):
        env_overrides({"RYDGATE_NOTHING": "1"})


def test_hash_ignores_output_settings():
    base = RunConfig()
    moved = base.replace("run", output_dir="elsewhere", output_format="json", plots=False)
    assert base.hash() == moved.hash()
    assert base.hash() != base.replace("run", seed=1).hash()


@given(st.floats(1e-6, 9e-4))
def test_hash_tracks_physics(temp):
    cfg = RunConfig().replace("trap", temperature=temp)
    assert (cfg.hash() == RunConfig().hash()) == (temp == 50e-6)
