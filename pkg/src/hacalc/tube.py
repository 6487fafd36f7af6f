"""Tube algebras of the ideal I = ker(rho) + (forms of positive degree).

For a basis lift the tube algebra of I^m is graded explicitly:
coefficients in form degree 2j may have valuation down to -floor(j/m).
A brute-force oracle builds the powers I^k as Z_(p)-lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .errors import InstanceTooLarge, InvariantViolation, PreconditionError
from .freealg import (FormElement, FormMonomial, LiftSpec, fast_product_terms, form_basis,
                      ideal_generators)
from .linalg import ZpLattice
from .padic import PadicScalar, valuation


def tube_bound(j: int, m: int) -> int:
    """Minimal valuation allowed in form degree 2j at level m."""
    if m < 1:
        raise PreconditionError("tube level must be >= 1")
    if j < 0:
        raise PreconditionError("j must be nonnegative")
    return -(j // m)


def _val(c, p):
    return valuation(c if isinstance(c, PadicScalar) else Fraction(c), p)


def tube_contains(x: FormElement, m: int, p: int) -> bool:
    for mono, c in x.terms.items():
        if mono.degree % 2:
            raise PreconditionError("tube algebras live in even degrees")
        if _val(c, p) < tube_bound(mono.degree // 2, m):
            return False
    return True


@dataclass(frozen=True)
class TubeParams:
    m: int
    D: int
    lift: LiftSpec

    def __post_init__(self):
        if self.m < 1:
            raise PreconditionError("tube level must be >= 1")
        if self.D < 0 or self.D % 2:
            raise PreconditionError("degree cap must be even and nonnegative")

    def scale_exponent(self, mono: FormMonomial) -> int:
        """Exponent s with the lattice generated by p^s * mono."""
        return tube_bound(mono.degree // 2, self.m)


class TubeElement:
    __slots__ = ("form", "params")

    def __init__(self, form: FormElement, params: TubeParams):
        if not tube_contains(form, params.m, params.lift.p):
            raise PreconditionError("form is not in the tube algebra at this level")
        self.form = form.with_cap(params.D) if form.degree_cap is None else form
        self.params = params

    def __eq__(self, other):
        return isinstance(other, TubeElement) and self.params == other.params and self.form == other.form

    def __hash__(self):
        raise TypeError("TubeElement is not hashable")

    def __repr__(self):
        return f"TubeElement(m={self.params.m}, {self.form.format(self.params.lift.basis)})"


def tube_multiply(a: TubeElement, b: TubeElement) -> TubeElement:
    if a.params != b.params:
        raise PreconditionError("tube elements with different parameters")
    prm = a.params
    D = prm.D
    res = fast_product_terms(a.form.terms, b.form.terms, prm.lift, D)
    out = FormElement(res, D, a.form.truncated or b.form.truncated)
    if not tube_contains(out, prm.m, prm.lift.p):
        raise InvariantViolation("tube algebra not closed under multiplication")
    t = TubeElement.__new__(TubeElement)
    t.form = out
    t.params = prm
    return t


# ---------------------------------------------------------------------------
# Brute-force ideal powers


MAX_RANK, MAX_DEGREE, MAX_POWER = 3, 6, 6


def _guard(k, lift, D):
    if lift.rank > MAX_RANK or D > MAX_DEGREE or k > MAX_POWER:
        raise InstanceTooLarge(
            f"brute force limited to rank <= {MAX_RANK}, D <= {MAX_DEGREE}, k <= {MAX_POWER}")
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    if not lift.is_associative():
        raise PreconditionError(
            "brute-force ideal powers need an associative mu: truncation by degree is "
            "compatible with the product only then")


class _Products:
    """Monomial-by-monomial product table, truncated at degree D."""

    def __init__(self, lift: LiftSpec, D: int):
        self.lift = lift
        self.D = D
        self.basis = form_basis(lift.rank, D)
        self.pos = {mono: i for i, mono in enumerate(self.basis)}
        self._table = {}

    def mono(self, i: int, j: int) -> dict:
        key = (i, j)
        hit = self._table.get(key)
        if hit is None:
            a, b = self.basis[i], self.basis[j]
            if a.degree + b.degree > self.D:
                hit = {}
            else:
                prod = fast_product_terms({a: Fraction(1)}, {b: Fraction(1)}, self.lift, self.D)
                hit = {self.pos[mm]: c for mm, c in prod.items()}
            self._table[key] = hit
        return hit

    def mult(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, x in u.items():
            di = self.basis[i].degree
            for j, y in v.items():
                if di + self.basis[j].degree > self.D:
                    continue
                xy = x * y
                for k, c in self.mono(i, j).items():
                    s = out.get(k, 0) + xy * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def vec(self, f: FormElement) -> dict:
        return {self.pos[mm]: Fraction(c) for mm, c in f.terms.items()}

    def form(self, v: dict) -> FormElement:
        return FormElement({self.basis[i]: c for i, c in v.items()}, self.D)


def _whole_ring(P: _Products) -> ZpLattice:
    lat = ZpLattice(P.lift.p)
    for i in range(len(P.basis)):
        lat.add({i: Fraction(1)})
    return lat


def _power_lattices(kmax: int, lift: LiftSpec, D: int) -> List[ZpLattice]:
    P = _Products(lift, D)
    gens = [P.vec(g) for g in ideal_generators(lift, D)]
    lats = [_whole_ring(P)]
    if kmax == 0:
        return lats
    first = ZpLattice(lift.p)
    for g in gens:
        first.add(g)
    lats.append(first)
    for _ in range(2, kmax + 1):
        nxt = ZpLattice(lift.p)
        prev = lats[-1].basis()
        for g in gens:
            for v in prev:
                w = P.mult(g, v)
                if w:
                    nxt.add(w)
        lats.append(nxt)
    return lats


def brute_force_ideal_power(k: int, lift: LiftSpec, D: int,
                            augmented: bool = False) -> List[FormElement]:
    """Generating set of I^k truncated at degree D.

    ``k = 1`` returns the defining generators of I.  With ``augmented`` the
    module sum_{j <= k} p^(k-j) I^j is returned instead (I^0 = T W); this is
    the submodule that contains p^k W.
    """
    _guard(k, lift, D)
    P = _Products(lift, D)
    if k == 1 and not augmented:
        return ideal_generators(lift, D)
    lats = _power_lattices(k, lift, D)
    if not augmented:
        return [P.form(v) for v in lats[k].basis()]
    lat = ZpLattice(lift.p)
    for j in range(k + 1):
        s = Fraction(lift.p) ** (k - j)
        for v in lats[j].basis():
            lat.add({i: c * s for i, c in v.items()})
    return [P.form(v) for v in lat.basis()]


def tube_lattice_bruteforce(lift: LiftSpec, m: int, D: int, jmax: Optional[int] = None) -> ZpLattice:
    """Z_(p)-span of the union over j of p^-j I^(m j), truncated at degree D."""
    if jmax is None:
        jmax = MAX_POWER // m
    _guard(m * jmax, lift, D)
    lats = _power_lattices(m * jmax, lift, D)
    out = ZpLattice(lift.p)
    for j in range(jmax + 1):
        s = Fraction(lift.p) ** (-j)
        for v in lats[m * j].basis():
            out.add({i: c * s for i, c in v.items()})
    return out


def tube_mismatches(lift: LiftSpec, m: int, D: int, vmin: int = -3):
    """Compare the brute-force tube lattice with the closed-form gradation.

    Tests ``p^v * mono`` for every monomial of degree <= D and
    ``vmin <= v <= 0``; returns the list of disagreements.
    """
    lat = tube_lattice_bruteforce(lift, m, D)
    basis = form_basis(lift.rank, D)
    bad = []
    for i, mono in enumerate(basis):
        for v in range(vmin, 1):
            c = Fraction(lift.p) ** v
            closed = tube_contains(FormElement({mono: c}), m, lift.p)
            brute = lat.contains({i: c})
            if closed != brute:
                bad.append((mono, v, closed, brute))
    return bad
