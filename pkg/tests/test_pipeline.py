import random

import pytest

from hacalc.errors import PreconditionError
from hacalc.freealg import LiftSpec
from hacalc.oracles import _base_tables, random_unimodular
from hacalc.padic import PadicConfig
from hacalc.pipeline import (LABEL, HacReport, PipelineConfig, canonical_lift, hac_truncated,
                             stabilization_verdict, tube_algebra)

Q2 = PadicConfig(2, 20)
IDEM = LiftSpec.from_table(2, ["e"], {(0, 0): [1]})


def dims(report):
    return [(g["m"], g["D"], g["h0"], g["h1"]) for g in report.grid]


def test_zero_algebra():
    W0 = LiftSpec.zero_product(2, 0)
    rep = hac_truncated(PipelineConfig(Q2, W0, (4, 6), (1, 2)))
    assert all(g["h0"] == 0 and g["h1"] == 0 for g in rep.grid)
    assert all(h["h0"] == 0 and h["h1"] == 0 for h in rep.holim)


def test_fp_small_grid():
    rep = hac_truncated(PipelineConfig(Q2, IDEM, (4, 6), (1, 2)))
    assert {(g["h0"], g["h1"]) for g in rep.grid} == {(1, 0)}
    assert rep.label == LABEL
    assert rep.to_json()["schema"] == 1
    assert not rep.verdict["stable"]     # a 2x2 grid is too small to judge


def test_config_validation():
    with pytest.raises(PreconditionError):
        PipelineConfig(Q2, IDEM, (4,), (3,))
    with pytest.raises(PreconditionError):
        PipelineConfig(Q2, IDEM, (5,), (1,))
    with pytest.raises(PreconditionError):
        PipelineConfig(PadicConfig(3, 20), IDEM, (4,), (1,))
    with pytest.raises(PreconditionError):
        PipelineConfig(Q2, IDEM, (4,), (1,), tol_val=21)
    nonassoc = LiftSpec.from_table(2, ["a", "b"], {(0, 0): [0, 2], (1, 0): [2, 0]})
    if not nonassoc.is_associative():
        with pytest.raises(PreconditionError):
            PipelineConfig(Q2, nonassoc, (4,), (1,))


def test_tube_inclusions_injective():
    rep = hac_truncated(PipelineConfig(Q2, IDEM, (6,), (1, 2, 3)))
    assert rep.holim[0]["dim0"] > 0


def test_canonical_lift_runs():
    C = canonical_lift(2, ["e"], {(0, 0): [1]})
    assert C.rank == 2 and C.is_associative()
    rep = hac_truncated(PipelineConfig(Q2, C, (2,), (1,), lift_kind="canonical"))
    g = rep.grid[0]
    assert g["h0"] >= 0 and g["h1"] >= 0
    assert rep.stages[0]["detail"] == "canonical"


def _in_basis(p, table, r, P, Q):
    lifted = {}
    for a in range(r):
        for b in range(r):
            vec = [0] * r
            for i in range(r):
                for j in range(r):
                    w = P[i][a] * P[j][b]
                    for k, c in enumerate(table.get((i, j), [0] * r)):
                        vec[k] += w * c
            lifted[(a, b)] = [sum(Q[l][k] * vec[k] for k in range(r)) for l in range(r)]
    return LiftSpec.from_table(p, [f"f{i}" for i in range(r)], lifted)


CASES = [(p, r, k) for p in (2, 3) for r in (1, 2) for k in range(len(_base_tables(p, r)))]


@pytest.mark.parametrize("p,r,k", CASES)
def test_basis_change_invariance(p, r, k):
    table = _base_tables(p, r)[k]
    std = LiftSpec.from_table(p, [f"e{i}" for i in range(r)], table)
    rng = random.Random(100 * p + 10 * r + k)
    P, Q = random_unimodular(r, rng)
    moved = _in_basis(p, table, r, P, Q)
    caps = (2,) if r == 2 else (2, 4)
    cfg = lambda L: PipelineConfig(PadicConfig(p, 20), L, caps, (1,))
    a, b = hac_truncated(cfg(std)), hac_truncated(cfg(moved))
    assert dims(a) == dims(b)
    assert [(h["h0"], h["h1"]) for h in a.holim] == [(h["h0"], h["h1"]) for h in b.holim]


def test_tube_algebra_is_associative():
    S = tube_algebra(IDEM, 2, 6)
    assert S.associator_failure() is None


def _report(values, flags=()):
    grid = []
    for (m, D), (h0, h1) in values.items():
        grid.append({"m": m, "D": D, "h0": h0, "h1": h1,
                     "precision_limited": (m, D) in flags, "inconsistent": False,
                     "truncated": True})
    return HacReport({}, grid, [])


def _grid(fn):
    return {(m, D): fn(m, D) for m in (2, 3, 4) for D in (8, 12, 16)}


def test_verdict_constant_grid():
    v = stabilization_verdict(_report(_grid(lambda m, D: (1, 0))))
    assert v["stable"] and v["dims"] == [1, 0]
    assert v["window"] == {"m": [3, 4], "D": [12, 16]}


def test_verdict_change_at_largest_cap():
    v = stabilization_verdict(_report(_grid(lambda m, D: (2, 0) if D == 16 else (1, 0))))
    assert not v["stable"]
    assert v["window"] == {"m": [3, 4], "D": [12, 16]}


def test_verdict_precision_flag():
    v = stabilization_verdict(_report(_grid(lambda m, D: (1, 0)), flags={(4, 12)}))
    assert not v["stable"]
    # flags outside the window do not matter
    v = stabilization_verdict(_report(_grid(lambda m, D: (1, 0)), flags={(2, 8)}))
    assert v["stable"]


def test_verdict_needs_three_values():
    grid = {(m, D): (1, 0) for m in (1, 2) for D in (4, 6, 8)}
    assert not stabilization_verdict(_report(grid))["stable"]


def test_worker_count_does_not_change_report(monkeypatch):
    cfg = PipelineConfig(Q2, IDEM, (4, 6), (1, 2))
    serial = hac_truncated(cfg).to_json()
    monkeypatch.setenv("HACALC_THREADS", "2")
    assert hac_truncated(cfg).to_json() == serial
    monkeypatch.setenv("HACALC_THREADS", "zero")
    with pytest.raises(PreconditionError):
        hac_truncated(cfg)
