"""Matrix file parsing/serialization and the command-line interface."""

import json

import numpy as np
import pytest

from scinv import RationalMatrix, parse_matrix, serialize_matrix
from scinv.cli import main
from scinv.io import MatrixParseError

NILPOTENT = {"rows": 3, "cols": 3, "data": [[4, -1, 2], [7, -2, 3], [-4, 1, -2]]}


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


class TestMatrixFormat:
    def test_integer_entries_parse_exact(self):
        m = parse_matrix({"rows": 2, "cols": 2, "data": [[1, 2], [3, "1/2"]]})
        assert isinstance(m, RationalMatrix)
        assert m.data[1][1] == pytest.approx(0.5)

    def test_complex_entries(self):
        m = parse_matrix({"rows": 1, "cols": 2, "data": [[[0, 1], 2]]})
        assert isinstance(m, np.ndarray)
        assert m[0, 0] == 1j and m[0, 1] == 2

    def test_float_entries_give_ndarray(self):
        m = parse_matrix({"rows": 1, "cols": 1, "data": [[0.5]]})
        assert isinstance(m, np.ndarray)

    def test_mixed_rational_complex_rejected(self):
        with pytest.raises(MatrixParseError):
            parse_matrix({"rows": 1, "cols": 2, "data": [["1/2", [0, 1]]]})

    def test_shape_mismatch_rejected(self):
        with pytest.raises(MatrixParseError):
            parse_matrix({"rows": 2, "cols": 2, "data": [[1, 2]]})

    def test_round_trip_exact(self):
        m = RationalMatrix([[1, "2/3"], [0, 5]])
        assert parse_matrix(serialize_matrix(m)) == m

    def test_round_trip_complex(self):
        m = np.array([[1 + 2j, 0], [0.5, -1j]])
        back = parse_matrix(serialize_matrix(m))
        assert np.array_equal(back, m)


class TestCli:
    def test_inv_sc_exact_envelope(self, tmp_path, capsys):
        path = write_json(tmp_path, "a.json", NILPOTENT)
        assert main(["inv", path, "--kind", "drazin", "--backend", "exact"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["backend"] == "exact"
        assert all(x == "0" for row in out["result"]["data"] for x in row)
        assert out["diagnostics"]["rank_in"] == 2
        assert out["diagnostics"]["rank_out"] == 0

    def test_inv_round_trip(self, tmp_path, capsys):
        path = write_json(tmp_path, "a.json", NILPOTENT)
        main(["inv", path, "--kind", "sc", "--backend", "exact"])
        out = json.loads(capsys.readouterr().out)
        m = parse_matrix(out["result"])
        assert isinstance(m, RationalMatrix)

    def test_inv_float_rank_mode(self, tmp_path, capsys):
        path = write_json(
            tmp_path, "m.json", {"rows": 2, "cols": 2, "data": [[0, 1], [0, 0]]}
        )
        assert main(["inv", path, "--kind", "sc", "--backend", "float",
                     "--rank-mode", "fixed:1"]) == 0
        out = json.loads(capsys.readouterr().out)
        got = parse_matrix(out["result"])
        if isinstance(got, RationalMatrix):
            got = got.to_float()
        assert np.abs(got - np.array([[0, 0], [1, 0]])).max() < 1e-10

    def test_jordan_exact(self, tmp_path, capsys):
        path = write_json(tmp_path, "a.json", NILPOTENT)
        assert main(["jordan", path]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["backend"] == "exact"
        assert out["blocks"] == [["0", 3]]

    def test_jordan_float_defective(self, tmp_path, capsys):
        path = write_json(
            tmp_path, "m.json", {"rows": 2, "cols": 2, "data": [[1.0, 1.0], [0.0, 1.0]]}
        )
        assert main(["jordan", path, "--backend", "float"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert [s for _, s in out["blocks"]] == [2]
        assert out["residual"] < 1e-8

    def test_rga_two_by_two(self, tmp_path, capsys):
        path = write_json(
            tmp_path, "m.json", {"rows": 2, "cols": 2, "data": [[1, 2], [3, 4]]}
        )
        assert main(["rga", path, "--kind", "mp"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["data"][0][0] == pytest.approx(-2.0)

    def test_simulate_writes_csv_and_summary(self, tmp_path, capsys):
        out_csv = str(tmp_path / "run.csv")
        assert main(["simulate", "--steps", "25", "--seed", "3", "--out", out_csv]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["steps"] == 25
        assert summary["max_err"] < 1e-8
        lines = open(out_csv).read().splitlines()
        assert lines[0] == "t,err,chain_failed"
        assert len(lines) == 26

    def test_verify_runs(self, capsys):
        assert main(["verify", "--suite", "drazin", "--trials", "3"]) == 0
        assert "pass suite=drazin" in capsys.readouterr().out

    def test_exit_2_on_bad_matrix_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("not json")
        assert main(["inv", str(path)]) == 2
        assert capsys.readouterr().err.startswith("error:parse:")

    def test_exit_2_on_bad_rank_mode(self, tmp_path):
        path = write_json(tmp_path, "a.json", NILPOTENT)
        assert main(["inv", path, "--rank-mode", "sideways"]) == 2

    def test_exit_2_on_zero_trials(self, capsys):
        assert main(["verify", "--trials", "0"]) == 2
        assert capsys.readouterr().err.startswith("error:usage:")

    def test_exit_3_on_irrational_spectrum(self, tmp_path, capsys):
        path = write_json(
            tmp_path, "irr.json", {"rows": 2, "cols": 2, "data": [[0, 1], [2, 0]]}
        )
        assert main(["inv", path, "--kind", "sc", "--backend", "exact"]) == 3
        assert capsys.readouterr().err.startswith("error:irrational-spectrum:")

    def test_auto_backend_falls_back_to_float(self, tmp_path, capsys):
        path = write_json(
            tmp_path, "irr.json", {"rows": 2, "cols": 2, "data": [[0, 1], [2, 0]]}
        )
        assert main(["inv", path, "--kind", "sc"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["backend"] == "float"
        assert "fell-back-to-float" in out["diagnostics"]["flags"]

    def test_exit_4_on_chain_failure(self, tmp_path, capsys, monkeypatch):
        from scinv import cli
        from scinv.floatcore import ChainFailure

        def boom(*args, **kwargs):
            raise ChainFailure("synthetic")

        monkeypatch.setattr(cli.fc, "numerical_jordan", boom)
        path = write_json(
            tmp_path, "m.json", {"rows": 2, "cols": 2, "data": [[1.0, 1.0], [0.0, 1.0]]}
        )
        assert main(["jordan", path, "--backend", "float"]) == 4
        assert capsys.readouterr().err.startswith("error:chain-failure:")

    def test_usage_error_exit_2(self):
        assert main(["bogus"]) == 2
