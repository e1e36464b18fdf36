"""System bundles, run manifests, and report files."""

import numpy as np
import pytest

from bimor import RunManifest, ValidationError, load_system, save_system
from bimor.io import REPORT_HEADER, ReportRow, write_report
from conftest import make_stable


class TestSystemBundle:
    def test_round_trip(self, rng, tmp_path):
        sys = make_stable(rng, 5, m=2, p=3)
        save_system(sys, tmp_path / "bundle", name="demo", note="round trip")
        back = load_system(tmp_path / "bundle")
        assert np.array_equal(back.A, sys.A)
        assert np.array_equal(back.B, sys.B)
        assert np.array_equal(back.C, sys.C)
        for Nk, Nk_back in zip(sys.N, back.N):
            assert np.array_equal(Nk, Nk_back)

    def test_exact_float_round_trip(self, tmp_path, sys7):
        # repr-based serialization must be bit-exact
        save_system(sys7, tmp_path / "b")
        back = load_system(tmp_path / "b")
        assert back.A.tobytes() == sys7.A.tobytes()

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ValidationError):
            load_system(tmp_path / "nowhere")

    def test_missing_matrix(self, rng, tmp_path):
        sys = make_stable(rng, 3)
        save_system(sys, tmp_path / "b")
        (tmp_path / "b" / "B.coo").unlink()
        with pytest.raises(ValidationError):
            load_system(tmp_path / "b")

    def test_dimension_mismatch_detected(self, rng, tmp_path):
        sys = make_stable(rng, 3)
        save_system(sys, tmp_path / "b")
        manifest = (tmp_path / "b" / "manifest.txt").read_text()
        (tmp_path / "b" / "manifest.txt").write_text(
            manifest.replace("n=3", "n=4"))
        with pytest.raises(ValidationError):
            load_system(tmp_path / "b")

    def test_extra_bilinear_file_rejected(self, rng, tmp_path):
        sys = make_stable(rng, 3)
        save_system(sys, tmp_path / "b")
        extra = tmp_path / "b" / "N_2.coo"
        extra.write_text((tmp_path / "b" / "N_1.coo").read_text())
        with pytest.raises(ValidationError):
            load_system(tmp_path / "b")

    def test_bad_header(self, rng, tmp_path):
        sys = make_stable(rng, 2)
        save_system(sys, tmp_path / "b")
        path = tmp_path / "b" / "A.coo"
        lines = path.read_text().split("\n")
        lines[0] = "2 2"
        path.write_text("\n".join(lines))
        with pytest.raises(ValidationError):
            load_system(tmp_path / "b")

    def test_entry_count_checked(self, rng, tmp_path):
        sys = make_stable(rng, 2)
        save_system(sys, tmp_path / "b")
        path = tmp_path / "b" / "A.coo"
        lines = path.read_text().rstrip("\n").split("\n")
        path.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(ValidationError):
            load_system(tmp_path / "b")


class TestRunManifest:
    def test_round_trip(self, tmp_path):
        manifest = RunManifest(algorithm="tlhmora", r=3, band_kind="time",
                               band_lo=0.0, band_hi=0.5, mode="fixed",
                               truncation=3, tol=1e-5, init="bt", seed=7)
        manifest.save(tmp_path / "run.txt")
        back = RunManifest.load(tmp_path / "run.txt")
        assert back == manifest

    def test_missing_key(self, tmp_path):
        (tmp_path / "run.txt").write_text("r=3\n")
        with pytest.raises(ValidationError):
            RunManifest.load(tmp_path / "run.txt")


class TestReport:
    def test_format(self, tmp_path):
        rows = [ReportRow(algorithm="bt", r=3, band_lo=0.0, band_hi=0.5,
                          band_unit="s", error_metric="h2tau",
                          value=0.0850123456789, iterations=0,
                          converged=True)]
        path = tmp_path / "report.csv"
        write_report(rows, path)
        lines = path.read_text().strip().split("\n")
        assert lines[0].split(",") == REPORT_HEADER
        cells = lines[1].split(",")
        assert cells[0] == "bt"
        assert cells[6] == "0.0850123456789"
        assert cells[8] == "true"
