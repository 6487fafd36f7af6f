from fractions import Fraction

import pytest

from hacalc.errors import InstanceTooLarge, PreconditionError
from hacalc.freealg import FormElement, LiftSpec, fedosov_product, form_basis, monomial
from hacalc.linalg import ZpLattice
from hacalc.tube import (TubeElement, TubeParams, brute_force_ideal_power, tube_bound,
                         tube_contains, tube_mismatches, tube_multiply)

ZERO1 = LiftSpec.zero_product(2, 1)
ZERO2 = LiftSpec.zero_product(3, 4)
p = 3


def f(head, *tail, c=1):
    return FormElement.of(monomial(head, *tail), c)


def test_tube_bound_examples():
    assert tube_bound(0, 2) == 0
    assert tube_bound(3, 2) == -1
    assert tube_bound(4, 2) == -2
    with pytest.raises(PreconditionError):
        tube_bound(1, 0)


def test_tube_contains_examples():
    assert tube_contains(f(None, 0, 1, 2, 3, c=Fraction(1, p)), 2, p)
    assert not tube_contains(f(None, 0, 1, 2, 3, c=Fraction(1, p * p)), 2, p)
    assert not tube_contains(f(None, 0, 1, c=Fraction(1, p)), 2, p)
    assert tube_contains(f(None, 0, 1, c=Fraction(1, p)), 1, p)


def test_tube_multiply():
    L = LiftSpec.from_table(2, ["e"], {(0, 0): [1]})
    prm = TubeParams(1, 4, L)
    x = TubeElement(f(None, 0, 0, c=Fraction(1, 2)), prm)
    y = tube_multiply(x, x)
    assert tube_contains(y.form, 1, 2)
    assert y.form.degree() == 4
    assert y.form == fedosov_product(x.form, x.form, L, 4)
    one = TubeElement(f(0), prm)
    assert tube_multiply(one, one).form == fedosov_product(f(0), f(0), L, 4)
    zero = TubeElement(FormElement({}), prm)
    assert tube_multiply(x, zero).form.is_zero()
    with pytest.raises(PreconditionError):
        TubeElement(f(None, 0, 0, c=Fraction(1, 4)), prm)


def _lattice(forms, lift, D):
    basis = form_basis(lift.rank, D)
    pos = {m: k for k, m in enumerate(basis)}
    lat = ZpLattice(lift.p)
    for g in forms:
        lat.add({pos[m]: Fraction(c) for m, c in g.terms.items()})
    return lat, pos


def test_ideal_first_power_generators():
    L = LiftSpec.from_table(3, ["e"], {(0, 0): [1]})
    gens = brute_force_ideal_power(1, L, 4)
    lat, pos = _lattice(gens, L, 4)
    assert lat.contains({pos[monomial(0)]: 3})
    assert not lat.contains({pos[monomial(0)]: 1})
    assert lat.contains({pos[monomial(None, 0, 0)]: 1})
    assert lat.contains({pos[monomial(0, 0, 0, 0, 0)]: 1})


def test_ideal_square_zero_product():
    gens = brute_force_ideal_power(2, ZERO1, 4, augmented=True)
    lat, pos = _lattice(gens, ZERO1, 4)
    assert lat.contains({pos[monomial(0)]: 4})
    assert lat.contains({pos[monomial(None, 0, 0)]: 2})
    dede = f(None, 0, 0)
    sq = fedosov_product(dede, dede, ZERO1, 4)
    assert lat.contains({pos[m]: c for m, c in sq.terms.items()})


def test_ideal_of_zero_module():
    W0 = LiftSpec.zero_product(2, 0)
    assert brute_force_ideal_power(1, W0, 4) == []
    assert brute_force_ideal_power(3, W0, 4) == []


def test_brute_force_guards():
    with pytest.raises(InstanceTooLarge):
        brute_force_ideal_power(2, ZERO2, 4)
    nonassoc = LiftSpec.from_table(3, ["e"], {(0, 0): [3]}, assoc_mod_pi=True)
    assert nonassoc.is_associative()
    bad = LiftSpec.from_table(3, ["a", "b"], {(0, 0): [0, 3], (1, 0): [3, 0]})
    if not bad.is_associative():
        with pytest.raises(PreconditionError):
            brute_force_ideal_power(1, bad, 2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_gradation_matches_brute_force_rank1(m):
    L = LiftSpec.from_table(2, ["e"], {(0, 0): [1]})
    assert tube_mismatches(L, m, 6) == []
