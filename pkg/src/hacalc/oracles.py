"""Randomised self-checks shared by the test-suite and ``hacalc oracle``.

Every suite returns ``{"trials": n, "failures": [...]} `` with a short
description of each failure; nothing here raises on a failed check.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .freealg import (FormElement, FormMonomial, LiftSpec, TensorElement, _leading,
                      fast_product, fedosov_product, form_basis, iota, iota_inverse,
                      iota_monomial, word_basis)
from .linalg import SparseMatrix, padic_rank, rank, smith_normal_form
from .padic import PadicConfig, valuation

# ---------------------------------------------------------------------------
# random algebras


def _base_tables(p: int, r: int) -> List[dict]:
    """Associative F_p-algebras of dimension r, as structure-constant tables."""
    def e(k):
        v = [0] * r
        v[k] = 1
        return v
    out = [{}]                                                   # zero product
    out.append({(i, i): e(i) for i in range(r)})                 # F_p^r
    out.append({(i, j): e(i + j + 1) for i in range(r) for j in range(r)
                if i + j + 1 < r})                               # x F_p[x] / x^(r+1)
    out.append({(i, j): e(i + j) for i in range(r) for j in range(r)
                if i + j < r})                                   # F_p[x] / x^r
    out.append({(i, j): e((i + j) % r) for i in range(r) for j in range(r)})   # F_p[Z/r]
    if r == 2:
        out.append({(0, 0): e(0), (0, 1): e(1)})                 # e11, e12
    if r == 3:
        # upper triangular 2x2 matrices e11, e12, e22
        out.append({(0, 0): e(0), (0, 1): e(1), (1, 2): e(1), (2, 2): e(2)})
    return out


def _mat_inv_mod(P, p):
    n = len(P)
    A = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(P)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] % p), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, p)
        A[c] = [x * inv % p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] % p:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def _change_basis(table: dict, P, p: int, r: int) -> dict:
    """Structure constants in the basis f_a = sum_i P[i][a] e_i."""
    Pinv = _mat_inv_mod(P, p)
    out = {}
    for a in range(r):
        for b in range(r):
            vec = [0] * r
            for i in range(r):
                for j in range(r):
                    w = P[i][a] * P[j][b] % p
                    if not w:
                        continue
                    for k, c in enumerate(table.get((i, j), [0] * r)):
                        vec[k] = (vec[k] + w * c) % p
            # express sum vec_k e_k in the f basis
            new = [sum(Pinv[l][k] * vec[k] for k in range(r)) % p for l in range(r)]
            if any(new):
                out[(a, b)] = new
    return out


def random_lift(p: int, r: int, rng: random.Random, noise: bool = True,
                precision: int = 20) -> LiftSpec:
    """Random lift of a random associative F_p-algebra of dimension r.

    The reduction mod p is associative; with ``noise`` the lift gets random
    multiples of p added and is typically nonassociative.
    """
    table = rng.choice(_base_tables(p, r))
    while True:
        P = [[rng.randrange(p) for _ in range(r)] for _ in range(r)]
        if r == 0 or _mat_inv_mod(P, p) is not None:
            break
    table = _change_basis(table, P, p, r)
    lifted = {}
    for i in range(r):
        for j in range(r):
            base = table.get((i, j), [0] * r)
            lifted[(i, j)] = [c + (p * rng.randint(-2, 2) if noise else 0) for c in base]
    return LiftSpec.from_table(p, [f"e{i}" for i in range(r)], lifted,
                               assoc_mod_pi=True, precision=precision)


def random_unimodular(r: int, rng: random.Random, steps: int = 4):
    """Integer matrix of determinant +-1 and its inverse."""
    P = [[int(i == j) for j in range(r)] for i in range(r)]
    Q = [row[:] for row in P]
    for _ in range(steps if r > 1 else 0):
        i, j = rng.sample(range(r), 2)
        c = rng.choice((-2, -1, 1, 2))
        # P <- P E with E = 1 + c e_ij  (column j += c column i); Q <- E^-1 Q
        for row in P:
            row[j] += c * row[i]
        Q[i] = [x - c * y for x, y in zip(Q[i], Q[j])]
    if r and rng.random() < 0.5:
        P = [[-x if jj == 0 else x for jj, x in enumerate(row)] for row in P]
        Q[0] = [-x for x in Q[0]]
    return P, Q


def random_associative_lift(p: int, r: int, rng: random.Random, precision: int = 20) -> LiftSpec:
    """Exactly associative lift: an integral base algebra in a random Z-basis."""
    table = rng.choice(_base_tables(p, r))
    P, Q = random_unimodular(r, rng)
    lifted = {}
    for a in range(r):
        for b in range(r):
            vec = [0] * r
            for i in range(r):
                for j in range(r):
                    w = P[i][a] * P[j][b]
                    if w:
                        for k, c in enumerate(table.get((i, j), [0] * r)):
                            vec[k] += w * c
            lifted[(a, b)] = [sum(Q[l][k] * vec[k] for k in range(r)) for l in range(r)]
    return LiftSpec.from_table(p, [f"e{i}" for i in range(r)], lifted, precision=precision)


def random_form(rank: int, degrees, rng: random.Random, terms: int = 3, D: Optional[int] = None):
    pool = [m for m in form_basis(rank, max(degrees)) if m.degree in degrees]
    d = {}
    for _ in range(terms):
        d[rng.choice(pool)] = rng.randint(-3, 3)
    return FormElement(d, D)


# ---------------------------------------------------------------------------
# suites


def check_unitriangular(lift: LiftSpec, D: int) -> List[str]:
    fails = []
    forms = form_basis(lift.rank, D)
    seen = {}
    for m in forms:
        img = iota_monomial(m, lift)
        w = m.tail if m.head is None else (m.head,) + m.tail
        lengths = Counter(map(len, img))
        L = max(lengths)
        if L != len(w) or lengths[L] != 1 or w not in img:
            fails.append(f"iota({m}) does not have the single top word {w}")
            continue
        lm, sign = _leading(w)
        if lm != m or img[w] != sign:
            fails.append(f"iota({m}) leading term {img[w]}*{w} is not +-1 times its own word")
        if w in seen:
            fails.append(f"leading word {w} is shared by {seen[w]} and {m}")
        seen[w] = m
    n_words = len(word_basis(lift.rank, D + 1))
    if len(seen) != n_words:
        fails.append(f"leading words cover {len(seen)} of {n_words} words")
    return fails


def _degree_patterns(D: int):
    evens = range(0, D + 1, 2)
    return [t for t in itertools.product(evens, repeat=3) if sum(t) <= D]


def check_associativity(lift: LiftSpec, D: int, rng: random.Random,
                        exhaustive: bool = False, product: Callable = fedosov_product) -> List[str]:
    """(a.b).c == a.(b.c) for monomial triples of total degree <= D.

    Products are computed without truncation so the identity is exact.
    One random triple per degree pattern, or every triple if ``exhaustive``.
    """
    fails = []
    by_deg: Dict[int, list] = {}
    for m in form_basis(lift.rank, D):
        by_deg.setdefault(m.degree, []).append(m)
    for pat in _degree_patterns(D):
        if any(not by_deg.get(d) for d in pat):
            continue
        if exhaustive:
            triples = itertools.product(*(by_deg[d] for d in pat))
        else:
            triples = [tuple(rng.choice(by_deg[d]) for d in pat)]
        for ma, mb, mc in triples:
            a, b, c = (FormElement.of(x) for x in (ma, mb, mc))
            lhs = product(product(a, b, lift, None), c, lift, None)
            rhs = product(a, product(b, c, lift, None), lift, None)
            if lhs != rhs:
                fails.append(f"associativity fails on {(ma, mb, mc)}")
    return fails


def check_round_trip(lift: LiftSpec, D: int, rng: random.Random, samples: int = 1) -> List[str]:
    fails = []
    words = word_basis(lift.rank, D + 1)
    for _ in range(samples):
        t = TensorElement({rng.choice(words): rng.randint(-5, 5) for _ in range(4)})
        if iota(iota_inverse(t, lift), lift) != t:
            fails.append(f"iota(iota_inverse(t)) != t for {t.terms}")
        w = random_form(lift.rank, (0, 2, 4, 6), rng, 3)
        if w.degree() >= 0 and iota_inverse(iota(w, lift), lift) != w:
            fails.append(f"iota_inverse(iota(w)) != w for {w}")
    return fails


def fedosov_suite(trials: int = 1000, seed: int = 0, D: int = 6) -> dict:
    """Random lifts over p in (2, 3, 5) and ranks 1..3."""
    rng = random.Random(seed)
    failures = []
    for i in range(trials):
        p = (2, 3, 5)[i % 3]
        r = 1 + (i // 3) % 3
        lift = random_lift(p, r, rng)
        fs = check_unitriangular(lift, D)
        fs += check_round_trip(lift, D, rng)
        fs += check_associativity(lift, D, rng, exhaustive=(r == 1), product=fast_product)
        # a random pair through the defining product
        a = random_form(r, (0, 2, 4), rng, 2)
        b = random_form(r, (0, 2), rng, 2)
        if fedosov_product(a, b, lift, None) != fast_product(a, b, lift, None):
            fs.append("left-multiplication product disagrees with iota^-1(iota (x) iota)")
        failures += [f"trial {i} (p={p}, r={r}): {f}" for f in fs]
    return {"trials": trials, "failures": failures}


def linalg_suite(trials: int = 200, seed: int = 0, n: int = 20, p: int = 2, N: int = 20) -> dict:
    """Sparse Smith form against sympy; p-adic rank against rational rank."""
    from sympy import Matrix
    from sympy.matrices.normalforms import invariant_factors

    rng = random.Random(seed)
    cfg = PadicConfig(p, N)
    failures = []
    compared = 0
    for t in range(trials):
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        if t % 2:
            # force a rank drop with integer combinations of earlier rows
            k = rng.randint(1, n // 2)
            for i in range(n - k, n):
                a, b = rng.sample(range(n - k), 2)
                ca, cb = rng.randint(-2, 2), rng.randint(-2, 2)
                rows[i] = [ca * x + cb * y for x, y in zip(rows[a], rows[b])]
        M = SparseMatrix.from_dense(rows, "ZZ")
        S = smith_normal_form(M)
        oracle = [abs(int(x)) for x in invariant_factors(Matrix(rows))]
        oracle += [0] * (n - len(oracle))
        if S.diagonal != oracle:
            failures.append(f"matrix {t}: smith {S.diagonal} != oracle {oracle}")
        if (S.U @ M @ S.V).entries != {(i, i): d for i, d in enumerate(S.diagonal) if d}:
            failures.append(f"matrix {t}: U M V is not the Smith diagonal")
        rq = rank(M)
        rep = padic_rank(M.to_ring(cfg), N)
        if any(1 <= v < N for v in rep.pivot_valuations):
            continue
        compared += 1
        if rep.rank != rq:
            failures.append(f"matrix {t}: p-adic rank {rep.rank} != rational rank {rq}")
        inv_vals = sorted(valuation(d, p) for d in S.diagonal if d)
        if sorted(rep.pivot_valuations) and sum(rep.pivot_valuations) != sum(inv_vals):
            failures.append(f"matrix {t}: pivot valuations disagree with the Smith diagonal")
    return {"trials": trials, "failures": failures, "padic_compared": compared}


def tube_suite(ps=(2, 3), levels=(1, 2, 3), max_rank: int = 2, D: int = 6) -> dict:
    """Closed-form tube gradation against brute-force ideal powers."""
    from .tube import tube_mismatches
    failures = []
    runs = 0
    for p in ps:
        for lift in standard_associative_lifts(p, max_rank):
            for m in levels:
                for Dc in range(2, D + 1, 2):
                    runs += 1
                    bad = tube_mismatches(lift, m, Dc)
                    failures += [f"p={p} {lift.basis} m={m} D={Dc}: {b}" for b in bad[:3]]
    return {"trials": runs, "failures": failures}


def standard_associative_lifts(p: int, max_rank: int = 2) -> List[LiftSpec]:
    out = []
    for r in range(0, max_rank + 1):
        seen = set()
        for table in _base_tables(p, r):
            key = tuple(sorted((k, tuple(v)) for k, v in table.items()))
            if key in seen:
                continue
            seen.add(key)
            out.append(LiftSpec.from_table(p, [f"e{i}" for i in range(r)], table))
    return out


def xcomplex_suite(trials: int = 50, seed: int = 0) -> dict:
    """d^2 = 0 on X-complexes of random truncated tube algebras and small algebras."""
    from .pipeline import tube_algebra
    from .xcomplex import build_X
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        p = rng.choice((2, 3, 5))
        r = rng.randint(0, 2)
        lift = random_associative_lift(p, r, rng)
        D = 2 if r == 2 else rng.choice((2, 4, 6))
        m = rng.randint(1, max(1, D // 2))
        X = build_X(tube_algebra(lift, m, D))
        a, b = X.boundary_defect()
        if a.nnz() or b.nnz():
            failures.append(f"trial {t}: d^2 != 0")
    return {"trials": trials, "failures": failures}


SUITES = {
    "fedosov": fedosov_suite,
    "linalg": linalg_suite,
    "tube": tube_suite,
    "xcomplex": xcomplex_suite,
}
