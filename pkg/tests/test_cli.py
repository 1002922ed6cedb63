import json

import pytest

from detmoments.algebra import MomentPolynomial, sym
from detmoments.cli import main
from detmoments.series import EgfSeries


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eulerian(capsys):
    code, out, _ = run(capsys, "eulerian", "--n", "3")
    assert code == 0 and json.loads(out) == ["1", "4", "1"]
    code, out, _ = run(capsys, "eulerian", "--n", "4", "--format", "pretty")
    assert out.strip() == "1 11 11 1"


def test_egf_json_and_assignment(capsys, tmp_path):
    code, out, _ = run(capsys, "egf", "--ensemble", "wigner", "--k", "2", "--order", "3")
    s = EgfSeries.from_json(json.loads(out))
    assert code == 0 and s.order == 3
    f = tmp_path / "asg.json"
    f.write_text(json.dumps({"m1": "0", "m2": "1", "m3": "0", "m4": "1"}))
    code, out, _ = run(capsys, "egf", "--ensemble", "symmetric", "--order", "4", "--assign", str(f))
    s = EgfSeries.from_json(json.loads(out))
    assert [s.coeffs[n].constant_value() for n in range(5)] == [1, 1, 2, 8, 44]


def test_egf_component_and_specialize(capsys):
    code, out, _ = run(capsys, "egf", "--ensemble", "hermitian", "--order", "4", "--specialize", "symmetric",
                       "--component", "0")
    assert code == 0
    s = EgfSeries.from_json(json.loads(out))
    assert s.coeffs[1] == sym("mu2")
    code, _, err = run(capsys, "egf", "--ensemble", "symmetric", "--specialize", "wigner")
    assert code == 2 and "cannot specialize" in err


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--ensemble", "symmetric", "--n", "2")
    p = MomentPolynomial.from_json(json.loads(out))
    assert code == 0 and p == -2 * sym("m1") ** 2 * sym("m2") + sym("m2") ** 2 + sym("m4")
    code, out, _ = run(capsys, "oracle", "--ensemble", "hermitian", "--k", "1", "--n", "2", "--format", "pretty")
    assert out.strip() in ("kappa1^2 - lambda11", "-lambda11 + kappa1^2")


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--ensemble", "symmetric", "--k", "2", "--max-n", "5")
    assert code == 0 and json.loads(out)["passed"] is True
    code, out, _ = run(capsys, "verify", "--ensemble", "hermitian", "--max-n", "3", "--prune",
                       "--format", "pretty")
    assert code == 0 and out.count("PASS") == 4


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--ensemble", "wigner", "--n", "2")
    obj = json.loads(out)
    assert code == 0 and obj["crosscheck"]["passed"] and obj["tables"] == 36


def test_asymptotic(capsys):
    code, out, _ = run(capsys, "asymptotic", "--n", "20,40")
    rows = json.loads(out)
    assert code == 0 and [r["n"] for r in rows] == [20, 40]
    assert float(rows[1]["relative_error"]) < float(rows[0]["relative_error"])
    code, _, err = run(capsys, "asymptotic", "--n", "20,40", "--order", "30")
    assert code == 2 and "budget" in err


def test_sample(capsys):
    code, out, _ = run(capsys, "sample", "--dist", "rademacher", "--n", "2", "--trials", "2000", "--seed", "3")
    obj = json.loads(out)
    assert code == 0 and obj["ensemble"] == "symmetric"
    assert abs(float(obj["estimate"]) - 2) < 5 * float(obj["stderr"]) + 1e-12


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "egf")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"lambda11": {"re": "0", "im": "1"}}))
    code, _, err = run(capsys, "oracle", "--ensemble", "hermitian", "--n", "2", "--assign", str(bad))
    assert code == 2 and "lambda11" in err
    code, _, err = run(capsys, "oracle", "--ensemble", "symmetric", "--n", "2", "--assign",
                       str(tmp_path / "missing.json"))
    assert code == 2
    assert run(capsys, "eulerian", "--n", "-1")[0] == 2
