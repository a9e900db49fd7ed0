"""End-to-end command-line tests against golden output files.

Outputs are compared byte-for-byte. Regenerate with:
    OBSORDER_REGEN_GOLDEN=1 python3 -m pytest tests/test_cli.py
The verify subcommand reports wall time; that field is normalised to 0
before comparison.
"""

import json
import os
import shlex
import sys
from pathlib import Path

import numpy as np
import pytest

from obsorder.cli import main
from obsorder.io import dumps, matrix_to_dict

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("OBSORDER_REGEN_GOLDEN") == "1"

IDENTITY_ORACLE = shlex.join([sys.executable, "-m", "obsorder.demo_oracles.identity"])
AFFINE_ORACLE = shlex.join([sys.executable, "-m", "obsorder.demo_oracles.affine"])
CUBE_ORACLE = shlex.join([sys.executable, "-m", "obsorder.demo_oracles.cube"])


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def check_golden(name, text):
    path = GOLDEN / name
    if REGEN:
        path.write_text(text)
        return
    assert text == path.read_text(), f"output differs from golden file {name}"


def write_matrix(path, m):
    path.write_text(dumps(matrix_to_dict(np.asarray(m, dtype=np.complex128))) + "\n")


@pytest.fixture
def files(tmp_path):
    write_matrix(tmp_path / "zero2.json", np.zeros((2, 2)))
    write_matrix(tmp_path / "eye2.json", np.eye(2))
    write_matrix(tmp_path / "diag10.json", np.diag([1.0, 0.0]))
    write_matrix(tmp_path / "diag01.json", np.diag([0.0, 1.0]))
    write_matrix(tmp_path / "diag41.json", np.diag([4.0, 1.0]))
    write_matrix(tmp_path / "eye4.json", np.eye(4))
    write_matrix(tmp_path / "indef.json", np.diag([1.0, -1.0]))
    (tmp_path / "phi_diag12.json").write_text(
        dumps(
            {
                "T": matrix_to_dict(np.diag([1.0 + 0j, 2.0])),
                "conjugate": False,
                "X": matrix_to_dict(np.zeros((2, 2), dtype=np.complex128)),
            }
        )
        + "\n"
    )
    (tmp_path / "phi_scaled.json").write_text(
        dumps(
            {
                "T": matrix_to_dict(np.sqrt(2.0) * np.eye(2, dtype=np.complex128)),
                "conjugate": False,
                "X": matrix_to_dict(np.eye(2, dtype=np.complex128)),
            }
        )
        + "\n"
    )
    return tmp_path


class TestOrder:
    def test_leq(self, files, capsys):
        code, out, _ = run_cli(["order", str(files / "zero2.json"), str(files / "eye2.json")], capsys)
        assert code == 0
        check_golden("order_leq.json", out)

    def test_incomparable(self, files, capsys):
        code, out, _ = run_cli(
            ["order", str(files / "diag10.json"), str(files / "diag01.json")], capsys
        )
        assert code == 1
        check_golden("order_incomparable.json", out)
        payload = json.loads(out)
        assert payload["relation"] == "INCOMPARABLE"
        assert len(payload["witnesses"]) == 2

    def test_stdin(self, files, capsys, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO((files / "zero2.json").read_text()))
        code, out, _ = run_cli(["order", "-", str(files / "eye2.json")], capsys)
        assert code == 0
        check_golden("order_leq.json", out)

    def test_missing_file(self, files, capsys):
        code, _, err = run_cli(["order", str(files / "nope.json"), str(files / "eye2.json")], capsys)
        assert code == 2
        assert "error:" in err


class TestLambdaMax:
    def test_feasible(self, files, capsys):
        code, out, _ = run_cli(["lambda-max", str(files / "diag41.json"), "[[1,0],[0,0]]"], capsys)
        assert code == 0
        check_golden("lambda_max.json", out)
        assert json.loads(out)["lambda"] == pytest.approx(4.0, rel=1e-9)

    def test_infeasible_is_null(self, files, capsys):
        code, out, _ = run_cli(["lambda-max", str(files / "diag10.json"), "[[0,0],[1,0]]"], capsys)
        assert code == 0
        check_golden("lambda_max_null.json", out)
        assert json.loads(out)["lambda"] is None

    def test_rejects_indefinite(self, files, capsys):
        code, _, err = run_cli(["lambda-max", str(files / "indef.json"), "[[1,0],[0,0]]"], capsys)
        assert code == 2 and "error:" in err

    def test_rejects_non_unit(self, files, capsys):
        code, _, err = run_cli(["lambda-max", str(files / "eye2.json"), "[[2,0],[0,0]]"], capsys)
        assert code == 2 and "error:" in err


class TestRankOrder:
    def test_witness_files(self, files, capsys):
        out_dir = files / "out"
        code, out, _ = run_cli(
            ["rank-order", str(files / "eye4.json"), "--n", "1", "--out-dir", str(out_dir)], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["rank_gt_np1"] is True
        # paths are machine-local, so golden-compare only the witness metadata
        assert payload["witness"]["n"] == 1
        assert payload["witness"]["rank_E"] == 1
        assert payload["witness"]["rank_F"] == 3
        e = json.loads((out_dir / "E.json").read_text())
        f = json.loads((out_dir / "F.json").read_text())
        check_golden("rank_order_E.json", dumps(e) + "\n")
        check_golden("rank_order_F.json", dumps(f) + "\n")

    def test_boundary(self, files, capsys):
        code, out, _ = run_cli(["rank-order", str(files / "eye2.json"), "--n", "1"], capsys)
        assert code == 0
        check_golden("rank_order_boundary.json", out)
        assert json.loads(out) == {"rank_gt_np1": False}

    def test_rejects_indefinite(self, files, capsys):
        code, _, err = run_cli(["rank-order", str(files / "indef.json"), "--n", "1"], capsys)
        assert code == 2 and "error:" in err


class TestReconstruct:
    def test_identity(self, capsys):
        code, out, _ = run_cli(
            ["reconstruct", "--oracle", IDENTITY_ORACLE, "--dim", "3", "--seed", "0"], capsys
        )
        assert code == 0
        check_golden("reconstruct_identity.json", out)

    def test_affine(self, capsys):
        code, out, _ = run_cli(
            ["reconstruct", "--oracle", AFFINE_ORACLE, "--dim", "2", "--seed", "0"], capsys
        )
        assert code == 0
        check_golden("reconstruct_affine.json", out)
        payload = json.loads(out)
        assert payload["conjugate"] is False
        t = np.array([[c[0] + 1j * c[1] for c in row] for row in payload["T"]["entries"]])
        np.testing.assert_allclose(t, np.sqrt(2.0) * np.eye(2), atol=1e-10)

    def test_cube_rejected(self, capsys):
        code, _, err = run_cli(["reconstruct", "--oracle", CUBE_ORACLE, "--dim", "2"], capsys)
        assert code == 3 and "error:" in err

    def test_dead_oracle_is_transport(self, capsys):
        dead = shlex.join([sys.executable, "-c", "import sys; sys.exit(0)"])
        code, _, err = run_cli(["reconstruct", "--oracle", dead, "--dim", "2"], capsys)
        assert code == 4 and "error:" in err

    def test_empty_oracle_command(self, capsys):
        code, _, err = run_cli(["reconstruct", "--oracle", "", "--dim", "2"], capsys)
        assert code == 2 and "error:" in err


class TestPreserver:
    def test_affine_scalar_preserves(self, files, capsys):
        code, out, _ = run_cli(
            ["preserver", str(files / "phi_scaled.json"), "--kind", "commutativity"], capsys
        )
        assert code == 0
        check_golden("preserver_scaled.json", out)
        payload = json.loads(out)
        assert payload["preserves"] is True
        assert payload["canonical_form"]["lambda"] == pytest.approx(2.0)
        assert payload["canonical_form"]["mu"] == pytest.approx(1.0)

    def test_diag_breaks_orthogonality(self, files, capsys):
        code, out, _ = run_cli(
            ["preserver", str(files / "phi_diag12.json"), "--kind", "orthogonality"], capsys
        )
        assert code == 1
        check_golden("preserver_diag_orth.json", out)
        payload = json.loads(out)
        assert payload["preserves"] is False
        assert payload["counterexample"]["holds_before"] != payload["counterexample"]["holds_after"]

    def test_bad_kind(self, files, capsys):
        with pytest.raises(SystemExit):
            main(["preserver", str(files / "phi_scaled.json"), "--kind", "nope"])
        capsys.readouterr()

    def test_malformed_phi(self, files, capsys):
        bad = files / "bad.json"
        bad.write_text("{\"T\": 3}\n")
        code, _, err = run_cli(["preserver", str(bad), "--kind", "commutativity"], capsys)
        assert code == 2 and "error:" in err


class TestVerify:
    def test_suite_passes(self, capsys):
        code, out, _ = run_cli(
            ["verify", "lemma-rng", "--dims", "2,3", "--trials", "3", "--seed", "0"], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["failures"] == []
        payload["elapsed_ms"] = 0
        check_golden("verify_lemma_rng.json", dumps(payload) + "\n")

    def test_unknown_suite(self, capsys):
        code, _, err = run_cli(["verify", "nosuch"], capsys)
        assert code == 2 and "error:" in err

    def test_bad_dims(self, capsys):
        code, _, err = run_cli(["verify", "thm1", "--dims", "2,x"], capsys)
        assert code == 2 and "error:" in err
