import json
import os

import numpy as np
import pytest

from osrkit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def data(data_dir, name):
    return os.path.join(data_dir, name)


class TestOsrCommand:
    def test_shift_pair_structured(self, capsys, data_dir):
        code, out, _ = run_cli(
            capsys, "osr", data(data_dir, "shift_pair.json"), "--format", "structured"
        )
        assert code == 0
        report = json.loads(out)
        assert np.isclose(report["results"]["outer_spectral_radius"], 2.0)

    def test_identity_human(self, capsys, data_dir):
        code, out, _ = run_cli(capsys, "osr", data(data_dir, "identity.json"))
        assert code == 0
        assert "outer_spectral_radius: 1" in out

    def test_parse_error_exit_1(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{ not json }")
        code, _, err = run_cli(capsys, "osr", str(p))
        assert code == 1
        assert "parse" in err

    def test_shape_error_names_matrix(self, capsys, tmp_path):
        p = tmp_path / "bad_shape.json"
        p.write_text(json.dumps({
            "n": 2, "d": 1, "matrices": [[[[1, 0]]]],
        }))
        code, _, err = run_cli(capsys, "osr", str(p))
        assert code == 1
        assert "matrix 0" in err


class TestCertifyCommand:
    def test_nilpotent_ok(self, capsys, data_dir):
        code, out, _ = run_cli(
            capsys, "certify", data(data_dir, "nilpotent.json"),
            "--format", "structured",
        )
        assert code == 0
        report = json.loads(out)
        l = report["results"]["lyapunov_matrix"]
        assert np.isclose(l[0][0][0], 2.0)

    def test_identity_exit_2(self, capsys, data_dir):
        code, _, err = run_cli(capsys, "certify", data(data_dir, "identity.json"))
        assert code == 2
        assert "rho_hat" in err

    def test_target_below_radius_exit_2(self, capsys, data_dir):
        code, _, err = run_cli(
            capsys, "certify", data(data_dir, "shift_pair.json"), "--target", "1.0"
        )
        assert code == 2


class TestJsrCommand:
    def test_brackets_contain_two(self, capsys, data_dir):
        code, out, _ = run_cli(
            capsys, "jsr", data(data_dir, "shift_pair.json"),
            "--k", "1,2", "--format", "structured",
        )
        assert code == 0
        for row in json.loads(out)["results"]["brackets"]:
            assert row["lower"] - 1e-9 <= 2.0 <= row["upper"] + 1e-9

    def test_single_matrix_collapse(self, capsys, data_dir):
        code, out, _ = run_cli(
            capsys, "jsr", data(data_dir, "sigma_x.json"),
            "--methods", "words,osr", "--format", "structured",
        )
        rows = json.loads(out)["results"]["brackets"]
        for row in rows:
            assert np.isclose(row["lower"], 1.0) and np.isclose(row["upper"], 1.0)


class TestDynamicsCommand:
    def test_sigma_x(self, capsys, data_dir):
        code, out, _ = run_cli(
            capsys, "dynamics", data(data_dir, "sigma_x.json"),
            "--format", "structured",
        )
        assert code == 0
        res = json.loads(out)["results"]
        assert res["lambda_family"]["order"] == 2


class TestSymliftCommand:
    def test_basis_dump(self, capsys, data_dir):
        code, out, _ = run_cli(
            capsys, "symlift", data(data_dir, "shift_pair.json"),
            "--k", "1", "--format", "structured",
        )
        assert code == 0
        res = json.loads(out)["results"]
        assert res["lifts"][0]["basis"][0] == [2, 0]


class TestOutputAndUsage:
    def test_atomic_output_file(self, capsys, data_dir, tmp_path):
        out_path = tmp_path / "report.json"
        code, out, _ = run_cli(
            capsys, "osr", data(data_dir, "identity.json"),
            "--format", "structured", "-o", str(out_path),
        )
        assert code == 0
        assert out == ""
        assert json.loads(out_path.read_text())["command"] == "osr"

    def test_usage_error_exit_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["osr"])  # missing file
        assert exc.value.code == 1

    def test_unknown_command_exit_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate", "x.json"])
        assert exc.value.code == 1


class TestConfigEcho:
    def test_overrides_and_seed_echoed(self, capsys, data_dir):
        code, out, _ = run_cli(
            capsys, "osr", data(data_dir, "identity.json"),
            "--tol", "1e-7", "--q-max", "12", "--seed", "42",
            "--budget-words", "1000", "--format", "structured",
        )
        assert code == 0
        config = json.loads(out)["config"]
        assert config["cluster_tol"] == 1e-7
        assert config["q_max"] == 12
        assert config["seed"] == 42
        assert config["budget_words"] == 1000


class TestDeterminism:
    def test_structured_outputs_byte_identical(self, capsys, data_dir):
        outs = []
        for _ in range(2):
            _, out, _ = run_cli(
                capsys, "dynamics", data(data_dir, "amplitude_damping.json"),
                "--format", "structured",
            )
            doc = json.loads(out)
            doc.pop("timings")
            outs.append(json.dumps(doc, sort_keys=True))
        assert outs[0] == outs[1]
