import csv
import io
import json
import subprocess
import sys

import pytest

from zetastar.cli import DIVERGENT_TEXT, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_index_plain():
    code, out, _ = call("eval-index", "(2,1)")
    assert code == 0
    header, row = out.splitlines()
    assert header.split("\t") == ["index", "value", "err_estimate", "method"]
    assert abs(float(row.split("\t")[1]) - 3.0) < 1e-8


def test_eval_index_divergent():
    code, out, _ = call("eval-index", "2,(1)")
    assert code == 0 and DIVERGENT_TEXT in out


def test_eval_index_inadmissible_exit_2():
    code, out, err = call("eval-index", "1,2")
    assert code == 2 and out == "" and err.startswith("error:")


def test_eval_zstar_json():
    code, out, _ = call("eval-zstar", "1/2", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert abs(float(row["digit_series"]) - 1.6449340668482264) < 1e-9
    assert abs(float(row["via_index"]) - 1.6449340668482264) < 1e-9


def test_eval_zstar_one():
    code, out, _ = call("eval-zstar", "1")
    assert code == 0 and DIVERGENT_TEXT in out


def test_eval_zstar_out_of_domain():
    assert call("eval-zstar", "3/2")[0] == 2


def test_derivative_at_half():
    code, out, _ = call("derivative", "--at", "1/2^1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["side"] for r in rows] == ["left", "right"]
    assert rows[0]["value"] == "DIVERGES"
    assert abs(float(rows[1]["value"]) - 1.28986813369645) < 1e-12


def test_derivative_nondyadic():
    code, out, _ = call("derivative", "--at", "1/3", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert row["side"] == "two-sided" and float(row["value"]) > 0


def test_invert():
    code, out, _ = call("invert", "2.0", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert abs(float(row["z_decimal"]) - 2 / 3) < 1e-12
    assert row["binary"].startswith("0.101010")


def test_invert_domain_exit_2():
    assert call("invert", "0.5")[0] == 2


def test_graph_stdout():
    code, out, _ = call("graph", "--n", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "z,zstar" and len(lines) == 4


def test_graph_file(tmp_path):
    path = tmp_path / "g.csv"
    code, out, _ = call("graph", "--n", "16", "--out", str(path))
    assert code == 0 and "wrote 15 rows" in out
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 15
    vals = [float(r["zstar"]) for r in rows]
    assert vals == sorted(vals)


def test_verify_subset_passes():
    code, out, _ = call("verify", "--criteria", "1,2,16")
    assert code == 0
    assert out.splitlines()[-1].endswith(", 0 failed")


def test_verify_json():
    code, out, _ = call("verify", "--criteria", "6", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows and all(r["status"] == "PASS" for r in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["verify", "--criteria", "99"],
        ["verify", "--criteria", "a,b"],
        ["eval-index", "(2)", "--tol", "-1"],
        ["derivative"],
        ["eval-index", "(2)", "--format", "xml"],
    ],
)
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 2 and err


def test_global_flags_either_side():
    a = call("--format", "json", "eval-index", "(3)")
    b = call("eval-index", "(3)", "--format", "json")
    assert a == b and a[0] == 0


def test_deterministic_output():
    first = call("eval-zstar", "3/16")
    assert all(call("eval-zstar", "3/16") == first for _ in range(3))
    v1 = call("verify", "--criteria", "3,8")
    assert call("verify", "--criteria", "3,8") == v1


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "zetastar", "eval-index", "(2)"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "(2)" in proc.stdout
