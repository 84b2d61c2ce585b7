"""CLI surface: schemas, exit codes, reproducibility."""

import csv
import io
import json
import subprocess
import sys

import pytest

from ringrepeater.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFusionSuccess:
    def test_row_shape_and_reference(self, capsys):
        code, out, _ = run_cli(
            ["fusion-success", "--depth", "5", "--eta-steps", "100", "--out", "-"],
            capsys,
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 500
        assert rows[0].keys() == {"depth", "eta", "loss", "p_success",
                                  "p_standard_fusion"}

    def test_known_values(self, capsys):
        code, out, _ = run_cli(
            ["fusion-success", "--depth", "1", "--eta-min", "0", "--eta-max", "1",
             "--eta-steps", "2", "--out", "-"],
            capsys,
        )
        rows = list(csv.DictReader(io.StringIO(out)))
        by_eta = {float(r["eta"]): float(r["p_success"]) for r in rows}
        assert by_eta[0.0] == 0.0
        assert abs(by_eta[1.0] - 0.9375) < 1e-12

    def test_usage_error(self, capsys):
        code, _, err = run_cli(
            ["fusion-success", "--eta-min", "0.9", "--eta-max", "0.1", "--out", "-"],
            capsys,
        )
        assert code == 2 and "eta" in err


class TestPauliStats:
    def test_zero_lambda_row(self, capsys):
        code, out, _ = run_cli(
            ["pauli-stats", "--depth", "2", "--lambda-grid", "0",
             "--eta-steps", "3", "--out", "-"],
            capsys,
        )
        assert code == 0
        for row in csv.DictReader(io.StringIO(out)):
            assert float(row["eps"]) == 0.0 and float(row["eps_d"]) == 0.0

    def test_paper_point(self, capsys):
        code, out, _ = run_cli(
            ["pauli-stats", "--depth", "1", "--lambda-grid", "0.15",
             "--eta-min", "1", "--eta-max", "1", "--eta-steps", "1", "--out", "-"],
            capsys,
        )
        row = next(csv.DictReader(io.StringIO(out)))
        assert abs(float(row["eps"]) - 0.0324) < 1e-12
        assert abs(float(row["eps_d"]) - 0.2952) < 1e-12


class TestFtFusion:
    def test_suppression_with_depth(self, capsys):
        vals = {}
        for depth in (4, 8):
            code, out, _ = run_cli(
                ["ft-fusion", "--depth", str(depth), "--switch-layer", "3",
                 "--eta-min", "1", "--eta-max", "1", "--eta-steps", "1",
                 "--lambda-grid", "0.01", "--out", "-"],
                capsys,
            )
            assert code == 0
            vals[depth] = float(next(csv.DictReader(io.StringIO(out)))["eps_cond"])
        assert vals[8] < vals[4] and vals[8] <= 1e-3

    def test_invalid_switch(self, capsys):
        code, _, err = run_cli(
            ["ft-fusion", "--depth", "4", "--switch-layer", "9", "--out", "-"],
            capsys,
        )
        assert code == 2


class TestSimulate:
    def test_fusion_reference_within_three_sigma(self, capsys):
        code, out, _ = run_cli(
            ["simulate", "--mode", "fusion", "--depth", "1", "--eta", "1",
             "--trials", "20000", "--seed", "9", "--out", "-"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["sigma_distance"]["p_success"] < 3

    def test_zero_trials_rejected(self, capsys):
        code, _, err = run_cli(
            ["simulate", "--trials", "0", "--out", "-"], capsys
        )
        assert code == 2

    def test_resource_bound_exit(self, capsys):
        code, _, err = run_cli(
            ["simulate", "--depth", "6", "--trials", "10", "--out", "-"], capsys
        )
        assert code == 3

    def test_same_seed_byte_identical(self, capsys):
        args = ["simulate", "--mode", "pauli", "--depth", "1", "--eta", "0.9",
                "--lambda", "0.01", "--trials", "5000", "--seed", "4", "--out", "-"]
        _, out1, _ = run_cli(args, capsys)
        _, out2, _ = run_cli(args, capsys)
        assert out1 == out2


class TestRates:
    def test_csv_schema(self, capsys):
        code, out, _ = run_cli(
            ["rates", "--L-grid", "100", "--lambda-list", "0.001",
             "--n-max", "2", "--m-max", "25", "--out", "-"],
            capsys,
        )
        assert code == 0
        reader = csv.DictReader(io.StringIO(out))
        assert reader.fieldnames == ["L_km", "lambda", "m", "N", "Ntilde", "L0_km",
                                     "R_hz", "q", "mu", "eps_d", "tau0_s", "NE",
                                     "cost"]
        rows = list(reader)
        assert len(rows) == 1

    def test_optimize_alias(self, capsys):
        code, out, _ = run_cli(
            ["optimize", "--L-grid", "50", "--lambda-list", "0",
             "--n-max", "1", "--m-max", "10", "--out", "-"],
            capsys,
        )
        assert code == 0

    def test_empty_grid_is_usage_error(self, capsys):
        code, _, _ = run_cli(["rates", "--L-grid", "--out", "-"], capsys)
        assert code == 2


class TestResources:
    def test_known_counts(self, capsys):
        code, out, _ = run_cli(["resources", "--n", "4", "--depth", "2"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert (payload["f_CZ"], payload["f_M"], payload["f_P"]) == (13, 5, 16)
        assert payload["sequence"]["cz"] == 13

    def test_deeper(self, capsys):
        code, out, _ = run_cli(["resources", "--n", "4", "--depth", "3"], capsys)
        payload = json.loads(out)
        assert (payload["f_CZ"], payload["f_M"], payload["f_P"]) == (57, 21, 64)

    def test_base_convention(self, capsys):
        code, out, _ = run_cli(["resources", "--n", "4", "--depth", "1"], capsys)
        payload = json.loads(out)
        assert (payload["f_CZ"], payload["f_M"], payload["f_P"]) == (2, 1, 4)


class TestConfigFile:
    def test_config_merges_and_flags_override(self, tmp_path, capsys, monkeypatch):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"version": 1, "depth": 2, "eta_steps": 4}))
        monkeypatch.setattr(sys, "argv", ["ringrepeater", "--eta-steps", "2"])
        code, out, _ = run_cli(
            ["fusion-success", "--config", str(cfg), "--eta-steps", "2", "--out", "-"],
            capsys,
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 2 * 2  # depth from config, steps from flag

    def test_unknown_keys_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"version": 1, "bogus_key": 1}))
        code, _, err = run_cli(
            ["fusion-success", "--config", str(cfg), "--out", "-"], capsys
        )
        assert code == 2 and "bogus_key" in err


class TestOutputPlumbing:
    def test_outdir_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("RINGREPEATER_OUTDIR", str(tmp_path))
        code, out, _ = run_cli(["resources", "--n", "4", "--depth", "1"], capsys)
        assert code == 0
        assert (tmp_path / "resources.json").exists()

    def test_installed_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ringrepeater.cli", "resources", "--depth", "1"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["f_P"] == 4
