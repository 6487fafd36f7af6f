import io
import json
import subprocess
import sys

import pytest

from hacalc.cli import run_cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_leavitt_rose1(data_dir):
    code, out, _ = run("leavitt", "--graph", str(data_dir / "rose1.graph"))
    assert code == 0
    doc = json.loads(out)
    assert (doc["h0"], doc["h1"], doc["schema"]) == (1, 1, 1)


def test_cohn(data_dir):
    code, out, _ = run("cohn", "--graph", str(data_dir / "single_edge.graph"))
    assert code == 0 and json.loads(out)["h0"] == 2


def test_curve_torus():
    code, out, _ = run("curve", "--f", "x", "--p", "5")
    doc = json.loads(out)
    assert code == 0
    assert (doc["h0"], doc["h1"], doc["h1_basis"]) == (1, 1, ["dx/x"])


def test_hac_zero_algebra(data_dir):
    code, out, _ = run("hac", "--algebra", str(data_dir / "zero.json"),
                       "--tube-levels", "1", "--deg-caps", "2,4")
    doc = json.loads(out)
    assert code == 0
    assert all((g["h0"], g["h1"]) == (0, 0) for g in doc["grid"])
    assert doc["label"] == "truncated evidence"


def test_out_file(tmp_path, data_dir):
    target = tmp_path / "report.json"
    code, out, _ = run("leavitt", "--graph", str(data_dir / "rose2.graph"), "--out", str(target))
    assert code == 0 and target.read_text() == out


def test_bad_graph_names_line(data_dir):
    code, out, err = run("leavitt", "--graph", str(data_dir / "bad.graph"))
    assert code == 2 and not out
    assert "line 2" in err


def test_bad_json_names_line(data_dir):
    code, _, err = run("hac", "--algebra", str(data_dir / "bad.json"))
    assert code == 2 and "line 4" in err


@pytest.mark.parametrize("argv", [
    ["curve", "--f", "x^2", "--p", "5"],
    ["curve", "--f", "x", "--p", "4"],
    ["hac", "--algebra", "/nonexistent/fp.json"],
    ["frobnicate"],
    [],
])
def test_precondition_exit_code(argv):
    assert run(*argv)[0] == 2


def test_grid_violation(data_dir):
    code, _, err = run("hac", "--algebra", str(data_dir / "fp.json"),
                       "--tube-levels", "3", "--deg-caps", "4")
    assert code == 2 and "D >= 2" in err


def test_oracle_suite():
    code, out, _ = run("oracle", "--suite", "xcomplex", "--trials", "3")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["failures"] == []


def test_console_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "hacalc.cli", "leavitt", "--graph",
                           str(data_dir / "rose1.graph")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["h1"] == 1
