import csv
import io
import json
import math
import subprocess
import sys

import pytest

from nonlimit.cli import main


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_rules_check(tmp_path):
    code, text = run(tmp_path, "rules-check", "--seed", "42", "--trials", "100")
    assert code == 0
    table = rows(text)
    assert {r["rule"] for r in table} >= {"product", "quotient", "power", "logarithm", "exponential"}
    assert all(float(r["max_error"]) <= 1e-12 and r["pass"] == "true" for r in table)


def test_rules_check_zero_trials_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rules-check", "--trials", "0"])
    assert exc.value.code == 2


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_rules_check_deterministic(tmp_path, fmt):
    _, a = run(tmp_path, "rules-check", "--seed", "7", "--trials", "20", "--format", fmt, name="a")
    _, b = run(tmp_path, "rules-check", "--seed", "7", "--trials", "20", "--format", fmt, name="b")
    assert a == b


def test_deriv_expression(tmp_path):
    code, text = run(tmp_path, "deriv", "--expr", "t**2", "--t", "1", "--tau", "0.5")
    assert code == 0
    (row,) = rows(text)
    assert float(row["derivative_re"]) == 2.5
    assert float(row["second_re"]) == 2.0
    assert float(row["differential_re"]) == 1.25


def test_deriv_values(tmp_path):
    code, text = run(tmp_path, "deriv", "--values", "1,2,4", "--tau", "1")
    assert code == 0
    table = rows(text)
    assert [float(r["dx_re"]) for r in table[:2]] == [1.0, 2.0]
    assert table[2]["dx_re"] == ""


def test_deriv_rejects_unknown_names(tmp_path):
    code, _ = run(tmp_path, "deriv", "--expr", "__import__('os')", "--t", "0", "--tau", "1")
    assert code == 2


def test_osc_table(tmp_path):
    code, text = run(tmp_path, "osc", "--omega", "1", "--tau", "0.1", "--x0", "1", "--v0", "0",
                     "--steps", "10")
    assert code == 0
    table = rows(text)
    assert list(table[0]) == ["n", "t", "x_re", "x_im", "residual", "classical_re", "classical_im",
                              "abs_error"]
    assert len(table) == 10
    res = [float(r["residual"]) for r in table if r["residual"]]
    assert len(res) == 8 and max(res) <= 1e-12
    assert float(table[0]["x_re"]) == 1.0


def test_osc_steps_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["osc", "--omega", "1", "--tau", "0.1", "--steps", "2"])
    assert exc.value.code == 2


def test_osc_convergence(tmp_path):
    code, text = run(tmp_path, "osc", "--omega", "1", "--tau", "1e-3", "--convergence")
    assert code == 0
    table = rows(text)
    assert len(table) == 7
    for r in table[1:]:
        assert float(r["ratio"]) == pytest.approx(2.0, rel=0.05)


def test_osc_domain_error(tmp_path):
    code, _ = run(tmp_path, "osc", "--omega", "-1", "--tau", "0.1")
    assert code == 2


def test_heat_grid(tmp_path):
    code, text = run(tmp_path, "heat", "--alpha", "1", "--tau", "0.01", "--xi", "0.1",
                     "--nt", "6", "--ny", "6", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    assert doc["outputs"]["beta"] == pytest.approx(0.01)
    assert doc["outputs"]["gamma"] == pytest.approx(2.0)
    assert doc["diagnostics"]["residual_scaled"] <= 1e-10
    assert doc["table"]["columns"][:5] == ["m", "n", "t", "y", "x"]
    assert len(doc["table"]["rows"]) == 36


def test_heat_constant_field(tmp_path):
    code, text = run(tmp_path, "heat", "--alpha", "1", "--tau", "0.01", "--xi", "0.1",
                     "--C1", "2.5", "--C4", "0", "--nt", "3", "--ny", "4", "--format", "json")
    assert code == 0
    assert json.loads(text)["diagnostics"]["residual_max"] == 0


def test_heat_series(tmp_path):
    code, text = run(tmp_path, "heat", "--alpha", "1", "--tau", "0.01", "--xi", "0.1",
                     "--series", "--l", "1", "--phi", "sin(pi*x)", "--n-modes", "20")
    assert code == 0
    table = rows(text)
    assert len(table) == 100
    assert max(float(r["abs_diff"]) for r in table) <= 1e-10


def test_heat_grid_too_small():
    with pytest.raises(SystemExit) as exc:
        main(["heat", "--alpha", "1", "--tau", "0.1", "--xi", "0.1", "--nt", "1"])
    assert exc.value.code == 2


def test_vdp_cauchy(tmp_path):
    code, text = run(tmp_path, "vdp", "--lam", "1", "--omega", "1", "--x0", "2", "--v0", "1")
    assert code == 0
    table = rows(text)
    assert [r["label"] for r in table] == ["++", "+-", "-+", "--"]
    first = table[0]
    assert float(first["tau_re"]) == 0.5
    assert float(first["P_re"]) == 5
    assert float(first["Omega"]) == pytest.approx(1.05, abs=1e-15)
    assert float(first["residual_max"]) <= 1e-10
    assert first["status"] == "ok"
    assert table[2]["status"].startswith("2 + lam*tau = 0")
    assert math.isnan(float(table[2]["residual_max"]))


def test_vdp_rejections(tmp_path, capsys):
    code, text = run(tmp_path, "vdp", "--lam", "1", "--omega", "1", "--x0", "1", "--v0", "1")
    assert code == 2 and text is None
    assert "x0 != 0, x0 != 1 and v0 != 0" in capsys.readouterr().err
    code, _ = run(tmp_path, "vdp", "--lam", "1", "--omega", "1", "--x0", "0.5", "--v0", "0")
    assert code == 2


def test_vdp_excluded_tau(tmp_path, capsys):
    tau = (-3 + math.sqrt(5)) / 2
    code, _ = run(tmp_path, "vdp", "--lam", "3", "--omega", "1", "--tau", repr(tau))
    assert code == 2
    assert "excluded" in capsys.readouterr().err


def test_vdp_given_tau(tmp_path):
    code, text = run(tmp_path, "vdp", "--lam", "1", "--omega", "1", "--tau", "0.5", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    (row,) = doc["table"]["rows"]
    cols = doc["table"]["columns"]
    rec = dict(zip(cols, row))
    assert rec["A_re"] == pytest.approx(2.6174, abs=1e-4)
    assert rec["residual_max"] <= 1e-10


def test_json_keys_sorted_and_report_file(tmp_path):
    report = tmp_path / "report.json"
    code, _ = run(tmp_path, "osc", "--omega", "2", "--tau", "0.05", "--report", str(report))
    assert code == 0
    text = report.read_text()
    doc = json.loads(text)
    assert list(doc) == sorted(doc)
    assert text == json.dumps(doc, sort_keys=True, indent=2) + "\n"


def test_module_entry_point_stdout():
    args = [sys.executable, "-m", "nonlimit", "vdp", "--lam", "1", "--omega", "1", "--x0", "2", "--v0", "1"]
    a = subprocess.run(args, capture_output=True, text=True, check=True)
    b = subprocess.run(args, capture_output=True, text=True, check=True)
    assert a.stdout == b.stdout and a.stdout.startswith("label,")
