"""Command-line interface, exercised through click's test runner."""

import numpy as np
import pytest
from click.testing import CliRunner

from bimor.cli import main


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def sys_dir(tmp_path_factory, runner):
    path = tmp_path_factory.mktemp("cli") / "sys7"
    result = runner.invoke(main, ["example", "illustrative7", "-o", str(path)])
    assert result.exit_code == 0, result.output
    return path


@pytest.fixture(scope="module")
def rom_dir(tmp_path_factory, runner, sys_dir):
    out = tmp_path_factory.mktemp("cli") / "rom_run"
    result = runner.invoke(main, [
        "reduce", str(sys_dir), "--alg", "flhmora", "-r", "1",
        "--freq-band", "4", "6", "--mode", "fixed", "--truncation", "3",
        "-o", str(out)])
    assert result.exit_code == 0, result.output
    return out


class TestExample:
    def test_writes_bundle(self, sys_dir):
        assert (sys_dir / "manifest.txt").exists()
        assert (sys_dir / "A.coo").exists()
        assert (sys_dir / "N_1.coo").exists()

    def test_heat_grid(self, tmp_path, runner):
        out = tmp_path / "heat"
        result = runner.invoke(main, ["example", "heat", "--grid", "3",
                                      "-o", str(out)])
        assert result.exit_code == 0
        assert "n=9" in result.output


class TestReduce:
    def test_outputs(self, rom_dir):
        assert (rom_dir / "rom" / "manifest.txt").exists()
        assert (rom_dir / "run_manifest.txt").exists()
        table = (rom_dir / "outcome.csv").read_text()
        assert table.splitlines()[1].startswith("flhmora,1,4,6,rad/s,h2omega")

    def test_reports_convergence(self, runner, sys_dir, tmp_path):
        result = runner.invoke(main, [
            "reduce", str(sys_dir), "--alg", "flhmora", "-r", "1",
            "--freq-band", "4", "6", "--mode", "fixed", "--truncation", "3",
            "-o", str(tmp_path / "r")])
        assert result.exit_code == 0
        assert "converged" in result.output
        value = float(result.output.split(" = ")[1].split("(")[0])
        assert 0.5 < value < 2.0

    def test_missing_band_is_validation_error(self, runner, sys_dir,
                                              tmp_path):
        result = runner.invoke(main, [
            "reduce", str(sys_dir), "--alg", "tlhmora", "-r", "3",
            "-o", str(tmp_path / "r")])
        assert result.exit_code == 2

    def test_bad_order_is_validation_error(self, runner, sys_dir, tmp_path):
        result = runner.invoke(main, [
            "reduce", str(sys_dir), "--alg", "bt", "-r", "0",
            "--mode", "fixed", "-o", str(tmp_path / "r")])
        assert result.exit_code == 2

    def test_nonconvergence_exit_code(self, runner, sys_dir, tmp_path):
        result = runner.invoke(main, [
            "reduce", str(sys_dir), "--alg", "flhmora", "-r", "1",
            "--freq-band", "4", "6", "--mode", "fixed", "--truncation", "3",
            "--tol", "1e-12", "--max-iter", "5", "-o", str(tmp_path / "r")])
        assert result.exit_code == 4
        assert "not converged" in result.output


class TestEval:
    def test_norm(self, runner, sys_dir):
        result = runner.invoke(main, ["eval", str(sys_dir),
                                      "--mode", "fixed"])
        assert result.exit_code == 0
        assert result.output.startswith("h2 = ")

    def test_error_norm(self, runner, sys_dir, rom_dir):
        result = runner.invoke(main, [
            "eval", str(sys_dir), "--rom", str(rom_dir / "rom"),
            "--freq-band", "4", "6", "--mode", "fixed"])
        assert result.exit_code == 0
        assert result.output.startswith("h2omega_error = ")

    def test_both_bands_rejected(self, runner, sys_dir):
        result = runner.invoke(main, [
            "eval", str(sys_dir), "--time-band", "0", "1",
            "--freq-band", "0", "1"])
        assert result.exit_code == 2

    def test_bad_truncation_env(self, runner, sys_dir):
        result = runner.invoke(main, ["eval", str(sys_dir), "--mode",
                                      "fixed"],
                               env={"BIMOR_TRUNC": "many"})
        assert result.exit_code == 2


class TestResiduals:
    def test_freq_residuals(self, runner, sys_dir, rom_dir, tmp_path):
        out = tmp_path / "res.csv"
        result = runner.invoke(main, [
            "residuals", str(sys_dir), str(rom_dir / "rom"),
            "--freq-band", "4", "6", "--mode", "fixed", "-o", str(out)])
        assert result.exit_code == 0, result.output
        for name in ("cond_A", "cond_N", "cond_B", "cond_C"):
            assert name in result.output
        assert len(out.read_text().strip().split("\n")) == 5

    def test_band_required(self, runner, sys_dir, rom_dir):
        result = runner.invoke(main, [
            "residuals", str(sys_dir), str(rom_dir / "rom")])
        assert result.exit_code == 2


class TestSimulate:
    def test_trajectory_csv(self, runner, sys_dir, tmp_path):
        out = tmp_path / "traj.csv"
        result = runner.invoke(main, [
            "simulate", str(sys_dir), "--input", "0.01*sin(5*t)",
            "--until", "1.0", "--step", "0.001", "-o", str(out)])
        assert result.exit_code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "t,y_1"
        assert len(lines) == 1002

    def test_rom_comparison_with_figure(self, runner, sys_dir, rom_dir,
                                        tmp_path):
        out = tmp_path / "traj.csv"
        result = runner.invoke(main, [
            "simulate", str(sys_dir), "--input", "0.01*sin(5*t)",
            "--until", "1.0", "--step", "0.001",
            "--rom", str(rom_dir / "rom"), "-o", str(out)])
        assert result.exit_code == 0
        assert out.exists()
        assert (tmp_path / "traj.png").exists()
        header = out.read_text().split("\n", 1)[0]
        assert header == "t,y_1,yr_1,err"

    def test_bad_signal(self, runner, sys_dir, tmp_path):
        result = runner.invoke(main, [
            "simulate", str(sys_dir), "--input", "tan(t)",
            "--until", "1.0", "-o", str(tmp_path / "t.csv")])
        assert result.exit_code == 2


class TestBench:
    def test_illustrative_freq(self, runner, tmp_path):
        out = tmp_path / "bench"
        result = runner.invoke(main, ["bench", "illustrative-freq",
                                      "-o", str(out)])
        assert result.exit_code == 0, result.output
        table = (out / "table.csv").read_text().strip().split("\n")
        assert len(table) == 6  # header + 5 algorithms
        assert (out / "error_curves.png").exists()
        assert (out / "trajectory_flphmora.csv").exists()
        values = {line.split(",")[0]: float(line.split(",")[6])
                  for line in table[1:]}
        # pseudo-optimal stage attains the smallest band-limited error
        assert values["flphmora"] == min(values.values())
