"""Command-line interface: exit codes, stdout discipline, file outputs."""

import subprocess
import sys

import pytest

from fracepi import NumericalError, get_builtin, save_scenario
from fracepi.cli import main
from fracepi.scenario import CSV_HEADER


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_kv(out):
    pairs = {}
    for line in out.splitlines():
        key, sep, value = line.partition(": ")
        assert sep, f"stdout line is not key: value -> {line!r}"
        pairs[key] = value
    return pairs


class TestRun:
    def test_wuhan_small_grid(self, capsys, tmp_path):
        out_path = tmp_path / "traj.csv"
        code, out, _ = run_cli(capsys, "run", "--scenario", "wuhan",
                               "--t-end", "2", "--steps", "20",
                               "--out", str(out_path))
        assert code == 0
        kv = parse_kv(out)
        assert kv["scenario"] == "wuhan"
        assert kv["alpha"] == "1"
        assert kv["r0"] == "4.37513184233"
        assert kv["stability"] == "Indeterminate"
        assert kv["rows"] == "21"
        assert out_path.read_text().splitlines()[0] == CSV_HEADER

    def test_alpha_override(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "run", "--scenario", "wuhan",
                               "--alpha", "0.6", "--t-end", "1",
                               "--steps", "5", "--out",
                               str(tmp_path / "a.csv"))
        assert code == 0
        assert parse_kv(out)["alpha"] == "0.6"

    def test_scenario_file_path(self, capsys, tmp_path):
        sc_path = tmp_path / "custom.scn"
        save_scenario(get_builtin("portugal"), sc_path)
        code, out, _ = run_cli(capsys, "run", "--scenario", str(sc_path),
                               "--t-end", "1", "--steps", "5",
                               "--out", str(tmp_path / "p.csv"))
        assert code == 0
        assert parse_kv(out)["scenario"] == "portugal"

    def test_repeat_runs_byte_identical(self, capsys, tmp_path):
        paths = [tmp_path / "first.csv", tmp_path / "second.csv"]
        for path in paths:
            code, _, _ = run_cli(capsys, "run", "--scenario", "spain",
                                 "--t-end", "3", "--steps", "30",
                                 "--out", str(path))
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestSweep:
    def test_alpha_sweep(self, capsys, tmp_path):
        out_dir = tmp_path / "sweep"
        code, out, _ = run_cli(capsys, "sweep", "--scenario", "wuhan",
                               "--param", "alpha",
                               "--values", "0.75,0.85,1.0",
                               "--t-end", "2", "--steps", "20",
                               "--out-dir", str(out_dir))
        assert code == 0
        kv = parse_kv(out)
        assert kv["param"] == "alpha"
        assert kv["runs"] == "3"
        for label in ("0.75", "0.85", "1"):
            assert (out_dir / f"wuhan_alpha_{label}.csv").exists()
        summary = (out_dir / "summary.csv").read_text().splitlines()
        assert summary[0].startswith("param_value,R0,peak_I")
        assert len(summary) == 4
        # R0 does not depend on alpha
        r0s = {line.split(",")[1] for line in summary[1:]}
        assert r0s == {"4.375131842"}

    def test_beta_sweep_r0_scales(self, capsys, tmp_path):
        out_dir = tmp_path / "bsweep"
        code, out, _ = run_cli(capsys, "sweep", "--scenario", "wuhan",
                               "--param", "beta", "--values", "1.55,2.55",
                               "--t-end", "1", "--steps", "10",
                               "--out-dir", str(out_dir))
        assert code == 0
        summary = (out_dir / "summary.csv").read_text().splitlines()
        r0_low = float(summary[1].split(",")[1])
        r0_high = float(summary[2].split(",")[1])
        assert r0_low == pytest.approx(2.661787205216788, rel=1e-9)
        assert r0_high == pytest.approx(4.375131842330905, rel=1e-9)


class TestScalarCommands:
    def test_r0_default_rates(self, capsys):
        code, out, _ = run_cli(capsys, "r0")
        assert code == 0
        kv = parse_kv(out)
        assert kv["r0_factored"] == "4.37513184233"
        assert kv["r0_expanded"] == "4.37513184233"
        assert float(kv["difference"]) < 1e-12

    def test_r0_beta_flag(self, capsys):
        code, out, _ = run_cli(capsys, "r0", "--beta", "1.55")
        assert code == 0
        assert parse_kv(out)["r0_factored"] == "2.66178720522"

    def test_r0_from_scenario(self, capsys):
        # built-ins share one rate table, so any of them matches the default
        code, out, _ = run_cli(capsys, "r0", "--scenario", "spain")
        assert code == 0
        assert parse_kv(out)["r0_factored"] == "4.37513184233"

    def test_stability_branches(self, capsys):
        code, out, _ = run_cli(capsys, "stability")
        assert code == 0
        assert parse_kv(out)["classification"] == "Indeterminate"

        code, out, _ = run_cli(capsys, "stability", "--beta", "0.1",
                               "--beta-prime", "0.1")
        assert code == 0
        kv = parse_kv(out)
        assert float(kv["r0"]) < 1.0
        assert kv["classification"] == "GloballyStableDFE"


class TestVerifyCommand:
    def test_quick_level_passes(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--level", "quick")
        assert code == 0
        kv = parse_kv(out)
        assert kv.pop("result") == "pass"
        assert kv and all(v == "pass" for v in kv.values())
        # details are prose, so they belong on stderr
        assert err.strip()


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        (),
        ("frobnicate",),
        ("run", "--scenario", "wuhan", "--out", "x.csv", "--alpha", "1.5"),
        ("run", "--scenario", "wuhan", "--out", "x.csv", "--steps", "0"),
        ("run", "--scenario", "wuhan", "--out", "x.csv", "--t-end", "-3"),
        ("run", "--scenario", "wuhan", "--out", "x.csv", "--precision", "0"),
        ("run", "--scenario", "wuhan"),
        ("sweep", "--scenario", "wuhan", "--param", "gamma",
         "--values", "1", "--out-dir", "d"),
        ("sweep", "--scenario", "wuhan", "--param", "alpha",
         "--values", " , ", "--out-dir", "d"),
        ("sweep", "--scenario", "wuhan", "--param", "alpha",
         "--values", "0.5,nope", "--out-dir", "d"),
        ("sweep", "--scenario", "wuhan", "--param", "beta",
         "--values", "-1", "--out-dir", "d"),
        ("verify", "--level", "exhaustive"),
    ])
    def test_usage_errors(self, capsys, argv):
        code, out, err = run_cli(capsys, *argv)
        assert code == 1
        assert out == ""
        assert "usage" in err

    def test_unknown_scenario_is_validation_error(self, capsys, tmp_path):
        code, out, err = run_cli(capsys, "run", "--scenario", "atlantis",
                                 "--out", str(tmp_path / "x.csv"))
        assert code == 2
        assert out == ""
        assert "atlantis" in err

    def test_broken_scenario_file(self, capsys, tmp_path):
        path = tmp_path / "broken.scn"
        path.write_text("beta = fast\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "run", "--scenario", str(path),
                               "--out", str(tmp_path / "x.csv"))
        assert code == 2
        assert "error:" in err

    def test_unwritable_output_path(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "run", "--scenario", "wuhan",
                               "--t-end", "1", "--steps", "5",
                               "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 2
        assert "error:" in err

    def test_solver_failure_maps_to_exit_3(self, capsys, tmp_path,
                                           monkeypatch):
        def boom(*args, **kwargs):
            raise NumericalError("solution diverged at step 7", step_index=7)

        monkeypatch.setattr("fracepi.cli.run_scenario", boom)
        code, out, err = run_cli(capsys, "run", "--scenario", "wuhan",
                                 "--out", str(tmp_path / "x.csv"))
        assert code == 3
        assert out == ""
        assert "diverged" in err


class TestEntryPoints:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "fracepi", "r0", "--beta", "1.55"],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        assert "r0_factored: 2.66178720522" in proc.stdout

    def test_console_script(self):
        proc = subprocess.run(["fracepi", "stability"],
                              capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        assert "classification: Indeterminate" in proc.stdout
