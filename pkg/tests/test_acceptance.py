"""Acceptance criteria, one test each.

Each test records a ``criterion N: PASS|FAIL ...`` line; the lines are printed
in the terminal summary (see conftest.py) and also when this file is run as a
script.
"""

import json
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from hacalc.curves import LocalizedRing, compare_with_leavitt_torus, de_rham
from hacalc.freealg import LiftSpec
from hacalc.leavitt import DirectedGraph, cycle, ha_cohn, ha_leavitt, rose, single_edge
from hacalc.oracles import fedosov_suite, linalg_suite, tube_suite, xcomplex_suite
from hacalc.padic import PadicConfig
from hacalc.pipeline import LABEL, PipelineConfig, hac_truncated
from hacalc.xcomplex import TruncatedAlgebra, build_X, homology

DATA = Path(__file__).parent / "data"
RESULTS = []


def record(n, ok, elapsed, limit=None, detail=""):
    ok = ok and (limit is None or elapsed < limit)
    budget = f", limit {limit}s" if limit is not None else ""
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s{budget}) {detail}".rstrip()
    RESULTS.append(line)
    print(line)
    return ok


def test_criterion_1_leavitt_golden_values():
    t = time.perf_counter()
    expected = [(rose(1), (1, 1)), (rose(2), (0, 0)), (rose(3), (0, 0)),
                (DirectedGraph.make(["v"]), (1, 0)), (cycle(2), (1, 1)), (single_edge(), (1, 0))]
    bad = [E.to_text() for E, dims in expected if ha_leavitt(E).dims() != dims]
    bad += [E.to_text() for E, _ in expected if ha_cohn(E).dims() != (len(E.vertices), 0)]
    three = DirectedGraph.make(["a", "b", "c"], [("a", "b")])
    if ha_cohn(three).h0 != 3:
        bad.append("cohn 3 vertices")
    elapsed = time.perf_counter() - t
    assert record(1, not bad, elapsed, 1, f"mismatches={bad}" if bad else "")


def test_criterion_2_fedosov_suite():
    t = time.perf_counter()
    res = fedosov_suite(1000, seed=0, D=6)
    elapsed = time.perf_counter() - t
    assert record(2, res["trials"] == 1000 and not res["failures"], elapsed, 120,
                  f"trials={res['trials']} failures={len(res['failures'])}"), res["failures"][:5]


def test_criterion_3_tube_gradation():
    t = time.perf_counter()
    res = tube_suite(ps=(2, 3), levels=(1, 2, 3), max_rank=2, D=6)
    elapsed = time.perf_counter() - t
    assert record(3, not res["failures"], elapsed, 300,
                  f"runs={res['trials']} failures={len(res['failures'])}"), res["failures"][:5]


def test_criterion_4_xcomplex_soundness():
    t = time.perf_counter()
    res = xcomplex_suite(50, seed=0)
    fails = list(res["failures"])
    E = lambda i, j: 2 * i + j
    mat = {(E(i, j), E(j, k)): {E(i, k): 1} for i in range(2) for j in range(2) for k in range(2)}
    for basis, mult in [(["e"], {(0, 0): {0: 1}}), (["e"], {}), ([], {}),
                        (["x", "x2"], {(0, 0): {1: 1}}), (["e11", "e12", "e21", "e22"], mat)]:
        a, b = build_X(TruncatedAlgebra(basis, mult)).boundary_defect()
        if a.nnz() or b.nnz():
            fails.append(f"d^2 != 0 for {basis}")
    X = build_X(TruncatedAlgebra(["e"], {(0, 0): {0: 1}}))
    idem = ((X.dim0, X.dim1), homology(X).dims())
    elapsed = time.perf_counter() - t
    ok = not fails and idem == ((1, 0), (1, 0))
    assert record(4, ok, elapsed, None, f"d2_failures={len(fails)} X(e^2=e) homology={idem[1]}")


def test_criterion_5_hac_of_fp():
    t = time.perf_counter()
    lift = LiftSpec.from_table(2, ["e"], {(0, 0): [1]}, precision=20)
    cfg = PipelineConfig(PadicConfig(2, 20), lift, (8, 12, 16), (2, 3, 4))
    rep = hac_truncated(cfg)
    elapsed = time.perf_counter() - t
    v = rep.verdict
    window = [rep.point(m, D) for m in v["window"]["m"] for D in v["window"]["D"]]
    ok = (rep.label == LABEL and v["stable"] and v["dims"] == [1, 0]
          and all((g["h0"], g["h1"]) == (1, 0) and not g["precision_limited"] for g in window))
    assert record(5, ok, elapsed, 60, f"window dims={v['dims']} stable={v['stable']}")


def test_criterion_6_curve_cross_check():
    t = time.perf_counter()
    line = de_rham(LocalizedRing.from_poly("1", 5))
    torus = de_rham(LocalizedRing.from_poly("x", 5))
    cmp = compare_with_leavitt_torus()
    elapsed = time.perf_counter() - t
    ok = line.dims() == (1, 0) and torus.dims() == (1, 1) and torus.h1_basis == ["dx/x"] and cmp
    assert record(6, ok, elapsed, 1,
                  f"line={line.dims()} torus={torus.dims()} {torus.h1_basis} compare={cmp}")


def test_criterion_7_linalg_oracle():
    t = time.perf_counter()
    res = linalg_suite(200, seed=0, n=20)
    elapsed = time.perf_counter() - t
    assert record(7, not res["failures"], elapsed, 60,
                  f"matrices={res['trials']} padic_compared={res['padic_compared']} "
                  f"failures={len(res['failures'])}"), res["failures"][:5]


CLI_RUNS = [
    ["leavitt", "--graph", str(DATA / "rose1.graph")],
    ["cohn", "--graph", str(DATA / "single_edge.graph")],
    ["curve", "--f", "x^2-x", "--p", "5"],
    ["hac", "--algebra", str(DATA / "fp.json"), "--tube-levels", "1,2", "--deg-caps", "4,6"],
    ["oracle", "--suite", "xcomplex", "--trials", "4", "--seed", "3"],
]


def _cli(argv, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run([sys.executable, "-m", "hacalc.cli"] + argv, capture_output=True,
                          env=env, check=False)
    return proc.returncode, proc.stdout


def test_criterion_8_cli_determinism():
    t = time.perf_counter()
    bad = []
    for argv in CLI_RUNS:
        a, b = _cli(argv, 1), _cli(argv, 2)
        if a[0] != 0 or a != b:
            bad.append(argv[0])
        else:
            json.loads(a[1])
    elapsed = time.perf_counter() - t
    assert record(8, not bad, elapsed, None,
                  f"subcommands={len(CLI_RUNS)} differing={bad}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
