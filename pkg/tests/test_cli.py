import json
from pathlib import Path
from typing import Any

import pytest

from delinf import conventions
from delinf.catalog import read_bundled
from delinf.cli import EXIT_FAILURE, EXIT_OK, EXIT_PARSE, main
from delinf.documents import ALGEBRA_SCHEMA, REPORT_SCHEMA


def run_cli(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, dict[str, Any]]:
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def broken_algebra(tmp_path: Path) -> Path:
    """A document whose differential does not square to zero."""
    path = tmp_path / "broken.json"
    path.write_text(
        json.dumps(
            {
                "schema": ALGEBRA_SCHEMA,
                "name": "broken",
                "nilpotency": 2,
                "basis": [
                    {"name": "a", "degree": -1, "weight": 1},
                    {"name": "b", "degree": 0, "weight": 1},
                    {"name": "c", "degree": 1, "weight": 1},
                ],
                "operations": [
                    {"args": ["a"], "value": {"b": "1"}},
                    {"args": ["b"], "value": {"c": "1"}},
                ],
            }
        )
    )
    return path


class TestReport:
    def test_header(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "check", "structure", "heis", "--seed", "5")
        assert code == EXIT_OK
        assert report["schema"] == REPORT_SCHEMA
        assert report["status"] == "pass"
        header = report["header"]
        assert header["command"] == "check"
        assert header["seed"] == 5
        assert header["conventions"] == conventions.as_dict()
        assert set(header["inputs"]) == {"document"}
        assert len(header["inputs"]["document"]) == 64

    def test_output_is_canonical(self, capsys: pytest.CaptureFixture[str]):
        main(["check", "structure", "heis"])
        out = capsys.readouterr().out
        assert out == json.dumps(json.loads(out), sort_keys=True, indent=2) + "\n"

    def test_text_format(self, capsys: pytest.CaptureFixture[str]):
        code = main(["check", "structure", "heis", "--format", "text"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "status: pass" in out.splitlines()
        assert f"schema: {REPORT_SCHEMA}" in out.splitlines()


class TestExitCodes:
    def test_failed_check(self, capsys: pytest.CaptureFixture[str], broken_algebra: Path):
        code, report = run_cli(capsys, "check", "structure", str(broken_algebra))
        assert code == EXIT_FAILURE
        assert report["status"] == "fail"
        assert report["result"]["report"]["passed"] is False

    def test_malformed_json(self, capsys: pytest.CaptureFixture[str], tmp_path: Path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        code, report = run_cli(capsys, "check", "structure", str(path))
        assert code == EXIT_PARSE
        assert report["status"] == "error"
        assert report["error"]["code"] == "parse_error"

    def test_float(self, capsys: pytest.CaptureFixture[str], tmp_path: Path):
        data = json.loads(read_bundled("heis"))
        data["operations"][0]["value"]["Z"] = 1.0
        path = tmp_path / "float.json"
        path.write_text(json.dumps(data))
        code, report = run_cli(capsys, "check", "structure", str(path))
        assert code == EXIT_PARSE
        assert "float" in report["error"]["message"]

    def test_unknown_document(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "check", "structure", "no_such_document")
        assert code == EXIT_PARSE
        assert report["error"]["code"] == "parse_error"

    def test_wrong_document_kind(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "check", "morphism", "heis")
        assert code == EXIT_PARSE
        assert "MorphismDocument" in report["error"]["message"]

    def test_unknown_element_name(self, capsys: pytest.CaptureFixture[str]):
        code, _ = run_cli(capsys, "bch", "--algebra", "heis", "--a", "W=1")
        assert code == EXIT_PARSE

    def test_missing_arguments(self, capsys: pytest.CaptureFixture[str]):
        with pytest.raises(SystemExit) as exc_info:
            main(["bch"])
        assert exc_info.value.code == EXIT_PARSE
        assert "--algebra" in capsys.readouterr().err

    def test_invalid_budget(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "check", "structure", "heis", "--max-cost", "0")
        assert code == EXIT_PARSE
        assert report["error"]["code"] == "parse_error"

    def test_vertex_out_of_range(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(
            capsys, "simplex-from-star", "--algebra", "heis", "--n", "1", "--vertex", "3"
        )
        assert code == EXIT_PARSE
        assert "out of range" in report["error"]["message"]


class TestCommands:
    def test_bch(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "bch", "--algebra", "heis", "--a", "X=1", "--b", "Y=1")
        assert code == EXIT_OK
        assert report["result"]["bch"] == {"X": "1", "Y": "1", "Z": "1/2"}

    def test_bch_wrong_degree(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "bch", "--algebra", "acyclic_pair", "--a", "v=1")
        assert code == EXIT_FAILURE
        assert report["error"]["code"] == "degree_mismatch"

    def test_bch_samples(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "bch", "--algebra", "ut4", "--samples", "2", "--seed", "3")
        assert code == EXIT_OK
        result = report["result"]
        assert result["count"] == 2
        assert result["unital"] == 2
        assert result["associative"] == 2

    def test_gauge(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "gauge", "--algebra", "heis", "--x", "X=1", "--a", "Y=1")
        assert code == EXIT_OK
        assert set(report["result"]["witness"]) == {"0", "1", "0-1"}

    def test_fill_horn(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(
            capsys,
            "fill-horn",
            "--algebra",
            "heis",
            "--n",
            "2",
            "--k",
            "1",
            "--value",
            "0-1:X=1",
            "--value",
            "1-2:Y=1",
        )
        assert code == EXIT_OK
        assert report["result"]["filler"]["0-2"] == {"X": "1", "Y": "1", "Z": "1/2"}

    def test_mc_solve(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(
            capsys,
            "mc-solve",
            "--contraction",
            "dgla_pair_contraction",
            "--y",
            "y=1",
            "--preimage",
            "u=1",
        )
        assert code == EXIT_OK
        assert report["result"]["round_trip"] is True
        assert report["result"]["x"] == {"y": "1", "u": "1"}

    def test_transfer_to_simplex(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "transfer", "--algebra", "abelian_line", "--simplex", "1")
        assert code == EXIT_OK
        assert report["result"]["structure"]["schema"] == ALGEBRA_SCHEMA
        assert report["result"]["report"]["passed"] is True

    def test_transfer_needs_input(self, capsys: pytest.CaptureFixture[str]):
        code, _ = run_cli(capsys, "transfer")
        assert code == EXIT_PARSE

    def test_tot(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "tot", "--diagram", "cech3", "--degrees", "-1:1")
        assert code == EXIT_OK
        assert report["result"]["cohomology"] == {"-1": 1, "0": 1, "1": 0}

    def test_tot_bad_degrees(self, capsys: pytest.CaptureFixture[str]):
        code, _ = run_cli(capsys, "tot", "--diagram", "cech3", "--degrees", "low:high")
        assert code == EXIT_PARSE

    def test_obstruction(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(
            capsys, "obstruction", "--extension", "extension_square", "--x", "e=1"
        )
        assert code == EXIT_OK
        result = report["result"]
        assert result["normal_form"] == {"f": "-1/2"}
        assert result["is_zero"] is False
        assert result["lift"] is None

    def test_abelian_homotopy(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "abelian-homotopy", "--algebra", "abelian_line", "--i", "0")
        assert code == EXIT_OK
        assert report["result"]["agree"] is True

    def test_dupont_verify(self, capsys: pytest.CaptureFixture[str]):
        code, report = run_cli(capsys, "dupont-verify", "--n", "1")
        assert code == EXIT_OK
        assert report["result"]["report"]["passed"] is True
