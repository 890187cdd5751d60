import json

import numpy as np
import pytest

from weakcz import cli, imperfections as imp, tomography as tomo


def run_cli(args, tmp_path, name="out.txt"):
    path = tmp_path / name
    code = cli.main(args + ["--out", str(path)])
    text = path.read_text(encoding="utf-8") if path.exists() else ""
    return code, text


class TestSpinCommand:
    def test_full_phase_unit_success(self, tmp_path):
        code, text = run_cli(["spin", "--phi-deg", "180"], tmp_path)
        assert code == 0
        doc = json.loads(text)
        assert doc["results"]["optimal"]["p_success"] == 1.0

    def test_half_phase_value_and_couplings(self, tmp_path):
        code, text = run_cli(["spin", "--phi-deg", "90"], tmp_path)
        assert code == 0
        doc = json.loads(text)
        assert doc["results"]["optimal"]["p_success"] == pytest.approx(
            0.1715728752538099)
        assert doc["results"]["optimal"]["t"] ** 2 == pytest.approx(
            1.0 / (1.0 + np.cos(np.pi / 4)))

    def test_degenerate_phase_is_usage_error(self, capsys):
        assert cli.main(["spin", "--phi-deg", "0"]) == 1
        assert "error" in capsys.readouterr().err

    def test_csv_grid(self, tmp_path):
        code, text = run_cli(
            ["spin", "--phi-deg", "90", "--grid", "45:180:4", "--format", "csv"],
            tmp_path, "spin.csv")
        assert code == 0
        lines = text.strip().splitlines()
        assert lines[0] == "phi_deg,t,t_tilde,p_success"
        assert len(lines) == 5


class TestOpticalCommand:
    def test_two_thirds_reference(self, tmp_path):
        code, text = run_cli(
            ["optical", "--R", str(2.0 / 3.0)], tmp_path, "opt.json")
        assert code == 0
        doc = json.loads(text)
        assert doc["results"]["optimal_bypass"]["p_success"] == pytest.approx(1 / 9)
        filtered = doc["results"]["no_bypass"]["filtered"]
        assert filtered == pytest.approx([1 / 3, 1 / 3, 1 / 3, -1 / 3])

    def test_infeasible_angle_exits_two(self, capsys):
        code = cli.main(["optical", "--R", "0.3333", "--phi-x-deg", "0"])
        assert code == 2
        assert "infeasible" in capsys.readouterr().err


class TestSweepCommand:
    def test_csv_header_and_shape(self, tmp_path):
        code, text = run_cli(["sweep", "--grid", "0:45:5"], tmp_path, "sweep.csv")
        assert code == 0
        lines = text.strip().splitlines()
        assert lines[0] == cli.SWEEP_CSV_HEADER
        assert len(lines) == 6

    def test_ideal_params_unit_hofmann_column(self, tmp_path):
        code, text = run_cli(
            ["sweep", "--R", str(1.0 / 3.0), "--RH", "0", "--visibility", "1",
             "--grid", "5:40:8"], tmp_path, "ideal.csv")
        assert code == 0
        records = cli.sweep_records_from_csv(text)
        assert all(r.feasible for r in records)
        assert all(abs(r.f_h - 1.0) < 1e-9 for r in records)

    def test_byte_determinism(self, tmp_path):
        args = ["sweep", "--grid", "0:45:9"]
        _, first = run_cli(args, tmp_path, "a.csv")
        _, second = run_cli(args, tmp_path, "b.csv")
        assert first == second

    def test_csv_round_trip_fixpoint(self, tmp_path):
        _, text = run_cli(["sweep", "--grid", "0:45:9"], tmp_path, "rt.csv")
        records = cli.sweep_records_from_csv(text)
        assert cli.sweep_records_to_csv(records) == text

    def test_records_survive_serialization(self):
        records = imp.sweep_phi_x(imp.SetupParams(), [0.0, 10.0, 20.0])
        parsed = cli.sweep_records_from_csv(cli.sweep_records_to_csv(records))
        for orig, back in zip(records, parsed):
            assert back.feasible == orig.feasible
            if orig.feasible:
                assert back.f_h == pytest.approx(orig.f_h, rel=1e-11)
                assert back.f_chi == pytest.approx(orig.f_chi, rel=1e-11)
                assert back.p_s == pytest.approx(orig.p_s, rel=1e-11)

    def test_json_format(self, tmp_path):
        code, text = run_cli(
            ["sweep", "--grid", "0:45:3", "--format", "json"], tmp_path, "s.json")
        assert code == 0
        doc = json.loads(text)
        assert set(doc) == {"config", "results", "version"}
        assert doc["results"]["records"][0]["feasible"] is False
        assert doc["results"]["records"][0]["F_H"] is None

    def test_bad_grid_is_usage_error(self, capsys):
        assert cli.main(["sweep", "--grid", "0:45:0"]) == 1
        assert cli.main(["sweep", "--grid", "nonsense"]) == 1
        capsys.readouterr()

    def test_plot_written(self, tmp_path):
        plot = tmp_path / "sweep.png"
        code, _ = run_cli(
            ["sweep", "--grid", "0:45:9", "--plot", str(plot)], tmp_path, "p.csv")
        assert code == 0
        assert plot.stat().st_size > 1000


class TestTomographyCommand:
    def test_seed_required_for_counts(self, capsys):
        assert cli.main(["tomography", "--counts-scale", "1000"]) == 1
        assert "seed" in capsys.readouterr().err

    def test_noiseless_runs_without_seed(self, tmp_path):
        code, text = run_cli(
            ["tomography", "--noiseless", "--counts-scale", "5000"],
            tmp_path, "t.json")
        assert code == 0
        doc = json.loads(text)
        assert doc["results"]["estimate"]["fidelity_vs_model"] > 0.9999
        assert doc["results"]["estimate"]["resembles"] == "cz"
        assert doc["results"]["reference_measured"]["f_chi"] == 0.846

    def test_bypass_off_flagged_identity_like(self, tmp_path):
        code, text = run_cli(
            ["tomography", "--bypass-off", "--noiseless", "--counts-scale", "5000"],
            tmp_path, "off.json")
        assert code == 0
        doc = json.loads(text)
        assert doc["results"]["estimate"]["resembles"] == "identity"

    def test_seeded_json_byte_identical(self, tmp_path):
        args = ["tomography", "--counts-scale", "300", "--seed", "11"]
        _, first = run_cli(args, tmp_path, "t1.json")
        _, second = run_cli(args, tmp_path, "t2.json")
        assert first == second

    def test_counts_csv_round_trip(self, tmp_path):
        counts_path = tmp_path / "counts.csv"
        args = ["tomography", "--counts-scale", "500", "--seed", "3",
                "--counts-out", str(counts_path)]
        code, direct = run_cli(args, tmp_path, "direct.json")
        assert code == 0
        text = counts_path.read_text(encoding="utf-8")
        assert text.splitlines()[0] == cli.COUNTS_CSV_HEADER
        records = cli.counts_from_csv(text)
        assert cli.counts_to_csv(records) == text
        code, from_file = run_cli(
            ["tomography", "--counts-scale", "500", "--seed", "3",
             "--counts-in", str(counts_path)], tmp_path, "fromfile.json")
        assert code == 0
        direct_doc = json.loads(direct)
        file_doc = json.loads(from_file)
        assert file_doc["results"]["estimate"] == direct_doc["results"]["estimate"]

    def test_chi_serialization_shape(self, tmp_path):
        _, text = run_cli(
            ["tomography", "--counts-scale", "300", "--seed", "2"],
            tmp_path, "chi.json")
        doc = json.loads(text)
        for key in ("chi_raw", "chi_normalized"):
            block = doc["results"][key]
            assert len(block["re"]) == 16
            assert len(block["im"]) == 16
            assert all(len(row) == 16 for row in block["re"])
        norm_trace = sum(doc["results"]["chi_normalized"]["re"][i][i]
                         for i in range(16))
        assert norm_trace == pytest.approx(4.0)

    def test_csv_format_rejected(self, capsys):
        assert cli.main(["tomography", "--noiseless", "--format", "csv"]) == 1
        capsys.readouterr()

    def test_plot_written(self, tmp_path):
        plot = tmp_path / "chi.png"
        code, _ = run_cli(
            ["tomography", "--counts-scale", "300", "--seed", "8",
             "--plot", str(plot)], tmp_path, "tp.json")
        assert code == 0
        assert plot.stat().st_size > 1000


class TestOracleCheckCommand:
    def test_default_draws_pass(self, tmp_path):
        code, text = run_cli(["oracle-check", "--draws", "4"], tmp_path, "oc.txt")
        assert code == 0
        assert "4 draws passed" in text

    def test_corrupted_coefficient_fails(self, capsys):
        code = cli.main(["oracle-check", "--draws", "2", "--corrupt"])
        assert code == 3
        assert "mismatch" in capsys.readouterr().err

    def test_zero_draws_is_usage_error(self, capsys):
        assert cli.main(["oracle-check", "--draws", "0"]) == 1
        capsys.readouterr()


class TestParsing:
    def test_unknown_command_is_usage_error(self):
        assert cli.main(["frobnicate"]) == 1

    def test_missing_required_flag(self):
        assert cli.main(["spin"]) == 1

    def test_version_flag(self):
        assert cli.main(["--version"]) == 0
