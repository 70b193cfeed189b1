import json

import pytest

from transym.cli import main
from transym.foliation import build, save_model


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_builder(capsys):
    code, out, _ = run(capsys, "validate", "--builder", "heisenberg5")
    assert code == 0
    assert "result: PASS" in out


def test_validate_model_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    save_model(build("torus1"), path)
    code, out, _ = run(capsys, "validate", "--model", str(path))
    assert code == 0


def test_cohomology_degree(capsys):
    code, out, _ = run(capsys, "cohomology", "--builder", "torus2",
                       "--degree", "2", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["dimensions"] == {"2": 6}


def test_lefschetz_failure_exit_code(capsys):
    code, out, _ = run(capsys, "lefschetz", "--builder",
                       "kodaira_thurston")
    assert code == 1
    assert "FAIL" in out


def test_ddelta(capsys):
    code, _, _ = run(capsys, "ddelta", "--builder", "torus1")
    assert code == 0
    code, _, _ = run(capsys, "ddelta", "--builder", "kodaira_thurston")
    assert code == 1


def test_equivariant_checks(capsys):
    code, out, _ = run(capsys, "equivariant", "--builder", "heisenberg5",
                       "--cutoff", "2", "--action", "reeb",
                       "--check", "formality", "--check", "dgdelta",
                       "--check", "iota", "--check", "section")
    assert code == 0


def test_frobenius_with_output_file(capsys, tmp_path):
    out_path = tmp_path / "potential.json"
    code, out, _ = run(capsys, "frobenius", "--builder", "torus1",
                       "--order", "3", "--out", str(out_path))
    assert code == 0
    pot = json.loads(out_path.read_text())
    assert pot["coordinates"] == ["H0[0]", "H1[0]", "H1[1]", "H2[0]"]
    assert pot["potential"] == {"t1*t2*t3": "1", "t1^2*t4": "1/2"}


def test_report_all(capsys):
    code, _, _ = run(capsys, "report", "--builder", "torus1", "--all")
    assert code == 0
    code, _, _ = run(capsys, "report", "--builder", "kodaira_thurston")
    assert code == 1


def test_input_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "validate", "--builder", "trunc_linear_9_9")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\"schema\": \"wrong\"}")
    code, _, err = run(capsys, "validate", "--model", str(bad))
    assert code == 2
    code, _, _ = run(capsys, "validate")
    assert code == 2


def test_json_reports_deterministic(capsys):
    def strip_timing(text):
        report = json.loads(text)
        report.pop("timing", None)
        return json.dumps(report, sort_keys=True)

    _, out1, _ = run(capsys, "report", "--builder", "heisenberg5",
                     "--format", "json")
    _, out2, _ = run(capsys, "report", "--builder", "heisenberg5",
                     "--format", "json")
    assert strip_timing(out1) == strip_timing(out2)
