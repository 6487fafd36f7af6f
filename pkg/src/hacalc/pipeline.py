"""Truncated analytic cyclic homology of an algebra through a chosen lift.

For each tube level m and degree cap D the pipeline forms the algebra of
even forms of degree <= D with the Fedosov product, rescaled to the tube
lattice sum_j p^-floor(j/m) Omega^2j, builds its X-complex over Q_p and
takes homology.  For each D the levels are then assembled into a finite
homotopy limit along the tube inclusions.

Truncation drops Omega^{>D}.  For an associative lift this span is an ideal,
so each truncated object is a genuine algebra; nonassociative lifts are
refused because the dropped span is not an ideal for them.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .errors import InstanceTooLarge, InvariantViolation, PreconditionError
from .freealg import LiftSpec, fast_product_terms, form_basis
from .linalg import SparseMatrix, default_tolerance
from .padic import PadicConfig
from .tube import tube_bound
from .xcomplex import (ChainMap, TruncatedAlgebra, build_XData, holim_finite, homology,
                       x_functor)

LABEL = "truncated evidence"
MAX_DIM = 400

STAGES = [
    ("free lifting", "computed"),
    ("tensor algebra", "computed"),
    ("tube algebra", "computed"),
    ("linear growth bornology", "trivial at truncation"),
    ("tensor with F", "fused"),
    ("X-complex", "computed"),
    ("quasi-completion", "trivial at truncation"),
    ("homotopy limit", "computed"),
    ("homology", "computed"),
]

ORDER_NOTES = [
    "tensor with F is applied before the X-complex",
    "the homotopy limit is taken after the levelwise constructions",
]


@dataclass(frozen=True)
class PipelineConfig:
    padic: PadicConfig
    lift: LiftSpec
    degree_caps: Tuple[int, ...]
    tube_levels: Tuple[int, ...]
    tower_length: Optional[int] = None
    tol_val: Optional[int] = None
    lift_kind: str = "given"

    def __post_init__(self):
        if not self.degree_caps or not self.tube_levels:
            raise PreconditionError("degree_caps and tube_levels must be nonempty")
        if any(m < 1 for m in self.tube_levels):
            raise PreconditionError("tube levels must be >= 1")
        if any(D < 0 or D % 2 for D in self.degree_caps):
            raise PreconditionError("degree caps must be even and nonnegative")
        mmax = max(self.tube_levels)
        for D in self.degree_caps:
            if D < 2 * mmax:
                raise PreconditionError(f"degree cap D={D} violates D >= 2*max(m) = {2 * mmax}")
        if self.lift.p != self.padic.p:
            raise PreconditionError("lift and PadicConfig use different primes")
        if len(set(self.tube_levels)) != len(self.tube_levels) or \
                len(set(self.degree_caps)) != len(self.degree_caps):
            raise PreconditionError("grid values must be distinct")
        L = self.tower_length
        if L is not None and not 1 <= L <= len(self.tube_levels):
            raise PreconditionError("tower_length must lie between 1 and the number of tube levels")
        if self.tol_val is not None and not 1 <= self.tol_val <= self.padic.precision:
            raise PreconditionError("tol_val must lie in [1, N]")
        if not self.lift.is_associative():
            raise PreconditionError(
                "the pipeline needs an associative lift: dropping forms of degree > D is "
                "compatible with the Fedosov product only then")

    @property
    def tol(self) -> int:
        return self.tol_val if self.tol_val is not None else default_tolerance(self.padic)

    @property
    def levels(self) -> Tuple[int, ...]:
        return tuple(sorted(self.tube_levels))

    @property
    def caps(self) -> Tuple[int, ...]:
        return tuple(sorted(self.degree_caps))


def canonical_lift(p: int, basis: Sequence[str], table: dict, precision: int = 20,
                   max_rank: int = 16) -> LiftSpec:
    """The monoid-algebra lift V[A] on the underlying set of an F_p-algebra A.

    Basis vectors are the elements of A, multiplied as in A; rho sends each
    basis vector to the element it names.
    """
    d = len(basis)
    elems = list(itertools.product(range(p), repeat=d))
    if len(elems) > max_rank:
        raise InstanceTooLarge(f"V[A] would have rank {len(elems)} > {max_rank}")
    pos = {e: k for k, e in enumerate(elems)}

    def mul(a, b):
        out = [0] * d
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                if x and y:
                    for k, c in enumerate(table.get((i, j), [0] * d)):
                        out[k] = (out[k] + x * y * int(c)) % p
        return tuple(out)

    r = len(elems)
    lifted = {}
    for a, b in itertools.product(elems, repeat=2):
        vec = [0] * r
        vec[pos[mul(a, b)]] = 1
        lifted[(pos[a], pos[b])] = vec
    names = ["[" + ",".join(str(x) for x in e) + "]" for e in elems]
    rho = [[e[i] for e in elems] for i in range(d)]
    return LiftSpec.from_table(p, names, lifted, rho=rho, assoc_mod_pi=True, precision=precision)


# ---------------------------------------------------------------------------
# One grid point


@lru_cache(maxsize=32)
def _product_table(lift: LiftSpec, D: int):
    basis = form_basis(lift.rank, D)
    if len(basis) > MAX_DIM:
        raise InstanceTooLarge(f"truncated algebra of dimension {len(basis)} > {MAX_DIM}")
    pos = {mono: i for i, mono in enumerate(basis)}
    table = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            if a.degree + b.degree > D:
                continue
            prod = fast_product_terms({a: Fraction(1)}, {b: Fraction(1)}, lift, D)
            if prod:
                table[(i, j)] = {pos[mm]: c for mm, c in prod.items()}
    return basis, table


def scale_exponents(lift: LiftSpec, m: int, D: int) -> List[int]:
    return [tube_bound(mono.degree // 2, m) for mono in form_basis(lift.rank, D)]


def tube_algebra(lift: LiftSpec, m: int, D: int) -> TruncatedAlgebra:
    """Truncated tube algebra in the basis p^s(mono) * mono."""
    basis, table = _product_table(lift, D)
    s = scale_exponents(lift, m, D)
    p = Fraction(lift.p)
    mult = {}
    for (i, j), v in table.items():
        mult[(i, j)] = {k: c * p ** (s[i] + s[j] - s[k]) for k, c in v.items()}
    names = [mono.format(lift.basis) for mono in basis]
    return TruncatedAlgebra(names, mult, "QQ", truncated=True,
                            degrees=[mono.degree for mono in basis], check=len(basis) <= 60)


def _point(args):
    lift, m, D, cfg, tol = args
    S = tube_algebra(lift, m, D)
    X = build_XData(S).complex
    H = homology(X.to_ring(cfg), tol)
    return {
        "m": m, "D": D, "dim_S": S.dim, "dim0": X.dim0, "dim1": X.dim1,
        "h0": H.h0, "h1": H.h1,
        "precision_limited": H.precision_limited,
        "truncated": True,
        "inconsistent": False,
        "rank_d0": H.rank_d0, "rank_d1": H.rank_d1,
        "max_pivot_valuation": max(H.pivot_valuations, default=None),
        "min_pivot_valuation": min(H.pivot_valuations, default=None),
    }


def _holim(args):
    lift, levels, D, cfg, tol = args
    algs = [tube_algebra(lift, m, D) for m in levels]
    xds = [build_XData(S) for S in algs]
    maps = []
    for n in range(len(levels) - 1):
        s_lo = scale_exponents(lift, levels[n], D)
        s_hi = scale_exponents(lift, levels[n + 1], D)
        shifts = [b - a for a, b in zip(s_lo, s_hi)]
        if any(e < 0 for e in shifts):
            raise InvariantViolation(
                f"tube level {levels[n + 1]} is not contained in level {levels[n]}")
        p = Fraction(lift.p)
        inc = SparseMatrix(len(shifts), len(shifts),
                           {(i, i): p ** e for i, e in enumerate(shifts)}, "QQ")
        f = x_functor(inc, algs[n + 1], xds[n + 1], algs[n], xds[n])
        f.check(xds[n + 1].complex, xds[n].complex)
        maps.append(ChainMap(f.f0.to_ring(cfg), f.f1.to_ring(cfg)))
    tower = [xd.complex.to_ring(cfg) for xd in xds]
    hol = holim_finite(tower, maps)
    H = homology(hol, tol)
    return {"D": D, "levels": list(levels), "h0": H.h0, "h1": H.h1,
            "precision_limited": H.precision_limited, "dim0": hol.dim0, "dim1": hol.dim1}


def _workers() -> int:
    raw = os.environ.get("HACALC_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise PreconditionError(f"HACALC_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise PreconditionError("HACALC_THREADS must be >= 1")
    return n


def _run(fn, jobs):
    n = _workers()
    if n == 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, jobs))


# ---------------------------------------------------------------------------


@dataclass
class HacReport:
    config: dict
    grid: List[dict]
    holim: List[dict]
    verdict: dict = field(default_factory=dict)
    stages: List[dict] = field(default_factory=list)
    order: List[str] = field(default_factory=list)
    label: str = LABEL

    def point(self, m: int, D: int) -> dict:
        for g in self.grid:
            if g["m"] == m and g["D"] == D:
                return g
        raise KeyError((m, D))

    def to_json(self) -> dict:
        return {"schema": 1, "label": self.label, "config": self.config, "grid": self.grid,
                "holim": self.holim, "verdict": self.verdict, "stages": self.stages,
                "order": self.order}


def hac_truncated(cfg: PipelineConfig) -> HacReport:
    lift = cfg.lift
    levels = cfg.levels
    caps = cfg.caps
    jobs = [(lift, m, D, cfg.padic, cfg.tol) for D in caps for m in levels]
    grid = _run(_point, jobs)
    L = cfg.tower_length or len(levels)
    tower_levels = levels[len(levels) - L:]
    holim = _run(_holim, [(lift, tower_levels, D, cfg.padic, cfg.tol) for D in caps])
    stages = []
    for name, status in STAGES:
        entry = {"step": name, "status": status}
        if name == "free lifting":
            entry["detail"] = cfg.lift_kind
        if name == "tube algebra" and lift.rho is not None:
            entry["detail"] = "closed-form gradation used in positive degrees; lift is not a basis lift"
        stages.append(entry)
    config = {"p": cfg.padic.p, "precision": cfg.padic.precision, "tol_val": cfg.tol,
              "degree_caps": list(caps), "tube_levels": list(levels),
              "tower_length": L, "lift": lift.to_json()}
    rep = HacReport(config, grid, holim, {}, stages, list(ORDER_NOTES))
    rep.verdict = stabilization_verdict(rep)
    return rep


def stabilization_verdict(report: HacReport) -> dict:
    """Stable iff dims agree, unflagged, on the top 2x2 window of (m, D)."""
    ms = sorted({g["m"] for g in report.grid})
    Ds = sorted({g["D"] for g in report.grid})
    if len(ms) < 3 or len(Ds) < 3:
        return {"stable": False, "window": {"m": ms[-2:], "D": Ds[-2:]}, "dims": None,
                "reason": "need at least 3 grid values per axis"}
    win_m, win_D = ms[-2:], Ds[-2:]
    pts = [report.point(m, D) for m in win_m for D in win_D]
    dims = {(g["h0"], g["h1"]) for g in pts}
    flagged = [(g["m"], g["D"]) for g in pts if g["precision_limited"] or g["inconsistent"]]
    reason = ""
    if flagged:
        reason = f"flags set at {flagged}"
    elif len(dims) > 1:
        reason = "homology changes inside the window"
    stable = not reason
    return {"stable": stable, "window": {"m": win_m, "D": win_D},
            "dims": list(next(iter(dims))) if len(dims) == 1 else None,
            "reason": reason or "dims constant and unflagged"}
