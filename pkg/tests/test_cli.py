import json
import subprocess
import sys

import pytest

from rydgate import __version__
from rydgate.cli import EXIT_INVALID, EXIT_OK, main
from rydgate.config import load_config


def run_cli(*args):
    return main([str(a) for a in args])


def snapshot(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


@pytest.fixture(scope="module")
def all_runs(tmp_path_factory):
    dirs = [tmp_path_factory.mktemp(f"all{i}") for i in range(2)]
    codes = [run_cli("all", "--seed", 1, "--out", d) for d in dirs]
    return codes, [snapshot(d) for d in dirs]


def test_all_succeeds_and_is_byte_identical(all_runs):
    codes, (first, second) = all_runs
    assert codes == [EXIT_OK, EXIT_OK]
    assert first.keys() == second.keys()
    assert first == second


def test_all_writes_every_subcommand(all_runs):
    _, (files, _) = all_runs
    stems = {name.split("_")[0] for name in files}
    assert stems == {"budget", "single-qubit", "gate-opt", "interactions", "lifetimes",
                     "readout", "photoionization", "simulate"}
    assert sum(name.endswith(".png") for name in files) == 6


def test_header_carries_hash_version_and_seed(all_runs):
    _, (files, _) = all_runs
    cfg_hash = load_config(environ={}, overrides={"run": {"seed": 1}}).hash()
    for name, data in files.items():
        if name.endswith(".csv"):
            head = data.decode().splitlines()[:5]
            assert f"# rydgate: {__version__}" in head
            assert f"# config-hash: {cfg_hash}" in head
            assert "# seed: 1" in head
            assert name.endswith(f"_{cfg_hash}.csv")


def test_budget_file_reports_combined_times(all_runs):
    _, (files, _) = all_runs
    text = next(v for k, v in files.items() if k.startswith("budget_") and k.endswith(".csv")).decode()
    assert "# table: storage budget" in text


def test_simulate_repeat_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run_cli("simulate", "--seed", 1, "--seed", 1, "--out", d) == EXIT_OK
    assert snapshot(a) == snapshot(b)


def test_json_output(tmp_path):
    assert run_cli("readout", "--format", "json", "--out", tmp_path, "--no-plots") == EXIT_OK
    (path,) = tmp_path.iterdir()
    doc = json.loads(path.read_text())
    assert doc["meta"]["rydgate"] == __version__
    assert "detection error" in doc["tables"]
    assert doc["tables"]["detection error"][0].keys() >= {"background_per_s", "duration_us", "error"}


def test_regime_flag(tmp_path):
    assert run_cli("gate-opt", "--regime", "large-dd", "--out", tmp_path, "--no-plots") == EXIT_OK
    text = next(tmp_path.iterdir()).read_text()
    assert "# regime: large_dd" in text


def test_validation_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[trap]\npressure_mbar = -1\n")
    assert run_cli("budget", "--config", cfg, "--out", tmp_path) == EXIT_INVALID
    assert "rydgate: error:" in capsys.readouterr().err


def test_parse_error_exit_code(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[trap\n")
    assert run_cli("budget", "--config", cfg, "--out", tmp_path) == EXIT_INVALID


@pytest.mark.parametrize("args", [["nonsense"], ["budget", "--seed", "-1"], ["budget", "--format", "xml"]])
def test_argument_errors_exit_two(args):
    with pytest.raises(SystemExit) as info:
        main(args)
    assert info.value.code == 2


def test_console_script_version():
    out = subprocess.run([sys.executable, "-m", "rydgate.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and __version__ in out.stdout
