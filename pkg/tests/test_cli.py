import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from orediag.cli import INPUT_ERROR, UNVERIFIED, VERIFIED, main, render_text, run, run_file
from orediag.problem import load, load_text

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
SCHEMA = json.loads(resources.files("orediag").joinpath("schema/report.schema.json").read_text())


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def validate(doc):
    jsonschema.validate(doc, SCHEMA)


class TestDiagonalize:
    def test_running_shift_text(self, capsys):
        code, out, _ = cli(capsys, "diagonalize", PROBLEMS / "running_shift.txt")
        assert code == 0
        assert "  [0, x^4 + 3*x^3 - x^2 - 3*x, 0]" in out
        assert "residual: exact zero" in out and "verified: yes" in out
        assert "Ore set: {x}, closure rule integer_shifts" in out

    def test_json_report(self, capsys):
        code, out, _ = cli(capsys, "diagonalize", PROBLEMS / "running_shift.txt", "--json")
        doc = json.loads(out)
        validate(doc)
        assert code == 0 and doc["status"] == VERIFIED and doc["residual_zero"]
        assert doc["result"]["D"][1] == ["0", "0", "-x"]
        assert doc["result"]["decoupling"]["free_variables"] == [0]

    def test_identity(self, capsys):
        code, out, _ = cli(capsys, "diagonalize", PROBLEMS / "identity.txt", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["result"]["D"] == [["1", "0"], ["0", "1"]]
        assert doc["result"]["decoupling"]["ore_set"]["factors"] == []

    def test_pass_limit_is_internal_error(self, capsys):
        code, out, err = cli(capsys, "diagonalize", PROBLEMS / "running_shift.txt", "--max-passes", "2")
        assert code == 2 and "status: internal_error" in out and "after 2 passes" in err

    def test_qcomm_with_declared_involution(self, capsys):
        code, out, _ = cli(capsys, "diagonalize", PROBLEMS / "qcomm_2x2.json", "--json")
        doc = json.loads(out)
        validate(doc)
        assert code == 0 and doc["involution"] == {"x": "x", "op": "y"}


class TestSmith:
    def test_commutative_file(self, capsys):
        code, out, _ = cli(capsys, "smith", PROBLEMS / "smith_commutative.txt")
        assert code == 0 and "invariant factors: 1, x^2" in out

    def test_wrong_preset(self, capsys):
        code, out, err = cli(capsys, "smith", PROBLEMS / "weyl_2x2.json")
        assert code == 1 and "commutative preset" in err


class TestJacobson:
    def test_certified(self, capsys):
        code, out, _ = cli(capsys, "jacobson", PROBLEMS / "jacobson_m1.txt", "--json")
        doc = json.loads(out)
        validate(doc)
        assert code == 0 and doc["result"]["certified"]
        assert doc["result"]["normal_form"][0] == ["1", "0", "0"]

    def test_exhausted(self, capsys):
        code, out, _ = cli(capsys, "jacobson", PROBLEMS / "jacobson_m2_constant.txt")
        assert code == 2
        assert out.count("deg(c) = 4 (proper_submodule_found)") == 4
        assert "proper submodule of dimension 4 found" in out
        assert "verified: no" in out

    def test_attempt_override(self, capsys):
        code, out, _ = cli(capsys, "jacobson", PROBLEMS / "jacobson_m2_constant.txt", "--attempts", "2", "--seed", "5")
        assert code == 2 and "attempt seed=5:" in out and "attempt seed=7:" not in out

    def test_shift_refused(self, capsys):
        code, _, err = cli(capsys, "jacobson", PROBLEMS / "shift_2x2.json")
        assert code == 1 and "weyl" in err


class TestAnalyze:
    def test_not_unimodular(self, capsys):
        code, out, _ = cli(capsys, "analyze", PROBLEMS / "weyl_2x2.json", "--json")
        doc = json.loads(out)
        validate(doc)
        assert code == 0 and doc["result"]["status"] == "not_unimodular"

    def test_unimodular_inverse(self):
        prob = load_text("algebra = weyl\nmatrix:\n1, 0\n(x+1)*d^2+2*d-x+1, 1\n")
        rep = run("analyze", prob)
        validate(rep)
        assert rep["status"] == VERIFIED
        assert rep["result"]["inverse"] == [["1", "0"], ["-(x+1)*d^2 - 2*d + x - 1", "1"]]

    def test_non_square(self, capsys):
        code, _, err = cli(capsys, "analyze", PROBLEMS / "running_shift.txt")
        assert code == 1 and "square" in err


class TestInputErrors:
    def test_juxtaposition(self, capsys):
        path = PROBLEMS / "bad_juxtaposition.txt"
        code, out, err = cli(capsys, "diagonalize", path, "--json")
        doc = json.loads(out)
        validate(doc)
        assert code == 1 and doc["status"] == INPUT_ERROR
        assert f"{path}:3:8:" in err

    def test_missing_file(self, tmp_path):
        rep = run_file("diagonalize", str(tmp_path / "none.txt"))
        validate(rep)
        assert rep["status"] == INPUT_ERROR and "cannot read file" in rep["error"]

    def test_zero_row(self):
        rep = run("diagonalize", load_text("algebra = weyl\nmatrix:\nd, 1\n0, 0\n"))
        assert rep["status"] == INPUT_ERROR and "zero row" in rep["error"]

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(["factor", str(PROBLEMS / "identity.txt")])


class TestBatches:
    def test_mixed_exit_code(self, capsys):
        code, out, _ = cli(
            capsys, "diagonalize", PROBLEMS / "identity.txt", PROBLEMS / "bad_juxtaposition.txt", "--json"
        )
        doc = json.loads(out)
        validate(doc)
        assert code == 1 and [r["status"] for r in doc] == [VERIFIED, INPUT_ERROR]

    def test_jobs_match_serial(self, capsys):
        files = [PROBLEMS / n for n in ("identity.txt", "shift_2x2.json", "weyl_2x2.json")]
        _, serial, _ = cli(capsys, "diagonalize", *files, "--json")
        _, parallel, _ = cli(capsys, "diagonalize", *files, "--json", "--jobs", "3")
        assert json.loads(serial) == json.loads(parallel)

    def test_unverified_beats_success(self, capsys):
        code, _, _ = cli(capsys, "jacobson", PROBLEMS / "jacobson_m1.txt", PROBLEMS / "jacobson_m2_constant.txt")
        assert code == 2


class TestStability:
    @pytest.mark.parametrize("name", ["running_shift.txt", "jacobson_m1.txt"])
    def test_text_is_stable(self, name):
        cmd = "jacobson" if name.startswith("jacobson") else "diagonalize"
        a = render_text(run_file(cmd, str(PROBLEMS / name)))
        b = render_text(run_file(cmd, str(PROBLEMS / name)))
        assert a == b

    def test_verified_means_zero_residual(self):
        for path in sorted(PROBLEMS.iterdir()):
            if path.name.startswith("bad_"):
                continue
            prob = load(path)
            cmd = {"commutative": "smith"}.get(prob.algebra.kind, "diagonalize")
            rep = run(cmd, prob)
            validate(rep)
            if rep["verified"]:
                assert rep["residual_zero"] is True
            else:
                assert rep["status"] in (UNVERIFIED, INPUT_ERROR)
