import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hacalc.errors import PreconditionError
from hacalc.freealg import (FormElement, LiftSpec, TensorElement, closed_form_fedosov,
                            fast_product, fedosov_product, form_basis, ideal_decompose, iota,
                            iota_inverse, monomial)
from hacalc.oracles import check_round_trip, check_unitriangular, random_lift

ZERO3 = LiftSpec.zero_product(5, 5)
IDEM = LiftSpec.from_table(2, ["e"], {(0, 0): [1]})


def f(head, *tail, c=1):
    return FormElement.of(monomial(head, *tail), c)


def vec_form(lift, vec, *tail):
    return FormElement({monomial(k, *tail): c for k, c in vec.items()})


def d_vec(lift, vec, *rest):
    return FormElement({monomial(None, k, *rest): c for k, c in vec.items()})


def test_iota_examples():
    assert iota(f(None, 0, 1), ZERO3) == TensorElement.word(0, 1, c=-1)
    assert iota(f(None, 0, 0), IDEM) == TensorElement({(0,): 1, (0, 0): -1})
    assert iota(f(0, 1, 2), ZERO3) == TensorElement.word(0, 1, 2, c=-1)


def test_iota_inverse_examples():
    rng = random.Random(1)
    L = random_lift(5, 2, rng)
    t = TensorElement.word(0, 1)
    expected = vec_form(L, L.mu_basis(0, 1)) - f(None, 0, 1)
    assert iota_inverse(t, L) == expected
    assert iota_inverse(TensorElement.word(0), L) == f(0)


def test_fedosov_generators():
    rng = random.Random(2)
    L = random_lift(3, 3, rng)
    assert fedosov_product(f(0), f(1), L) == vec_form(L, L.mu_basis(0, 1)) - f(None, 0, 1)


def test_fedosov_associator_formula():
    rng = random.Random(4)
    L = random_lift(5, 3, rng)
    e = lambda i: {i: Fraction(1)}
    lhs = fedosov_product(f(None, 0, 1), f(2), L)
    rhs = (vec_form(L, L.mult(L.mult(e(0), e(1)), e(2)))
           - vec_form(L, L.mult(e(0), L.mult(e(1), e(2))))
           + f(0, 1, 2) - d_vec(L, L.mult(e(0), e(1)), 2)
           + FormElement({monomial(None, 0, k): c for k, c in L.mult(e(1), e(2)).items()}))
    assert lhs == rhs
    assert fast_product(f(None, 0, 1), f(2), L) == lhs


def test_zero_product_concatenates():
    a, b = f(None, 0, 1), f(None, 2, 3)
    prod = fedosov_product(a, b, ZERO3)
    assert prod == f(None, 0, 1, 2, 3)
    assert iota(prod, ZERO3) == TensorElement.word(0, 1, 2, 3)


def test_truncation_is_flagged():
    a, b = f(None, 0, 1), f(None, 2, 3)
    prod = fedosov_product(a, b, ZERO3, 2)
    assert prod.is_zero() and prod.truncated


def test_closed_form_for_associative_lift():
    tab = {(0, 0): [1, 0, 0], (0, 1): [0, 1, 0], (1, 2): [0, 1, 0], (2, 2): [0, 0, 1]}
    A = LiftSpec.from_table(3, ["e11", "e12", "e22"], tab)
    assert A.is_associative()
    rng = random.Random(0)
    basis = form_basis(3, 4)
    for _ in range(80):
        x = FormElement.of(rng.choice(basis))
        y = FormElement.of(rng.choice(basis))
        assert fedosov_product(x, y, A, 8) == closed_form_fedosov(x, y, A, 8)


def test_ideal_decompose():
    assert ideal_decompose(f(0, c=2), IDEM).in_I
    assert not ideal_decompose(f(0), IDEM).in_I
    assert ideal_decompose(f(None, 0, 0), IDEM).in_I
    assert not ideal_decompose(f(None, 0, 0, c=Fraction(1, 2)), IDEM).in_I


def test_lift_validation():
    with pytest.raises(PreconditionError):
        LiftSpec.from_json({"p": 2, "basis": ["e"], "mu": [[0, 3, [1]]]})
    with pytest.raises(PreconditionError):
        LiftSpec.from_json({"basis": ["e"]})
    L = LiftSpec.from_json(IDEM.to_json())
    assert L == IDEM


def test_nonassociative_mod_p_is_detected():
    # (e e) f = 0 but e (e f) = f
    tab = {(0, 1): [0, 1], (0, 0): [0, 0]}
    with pytest.raises(PreconditionError):
        LiftSpec.from_table(3, ["e", "f"], tab, assoc_mod_pi=True)
    L = LiftSpec.from_table(3, ["e", "f"], tab, assoc_mod_pi=False)
    assert not L.associative_mod_p()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5]), st.integers(1, 2))
def test_unitriangular_and_round_trip(seed, p, r):
    rng = random.Random(seed)
    L = random_lift(p, r, rng)
    assert check_unitriangular(L, 4) == []
    assert check_round_trip(L, 4, rng, samples=3) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fast_product_matches_iota_product(seed):
    rng = random.Random(seed)
    L = random_lift(rng.choice([2, 3, 5]), 2, rng)
    basis = form_basis(2, 4)
    x = FormElement.of(rng.choice(basis), rng.randint(-3, 3) or 1)
    y = FormElement.of(rng.choice(basis))
    assert fedosov_product(x, y, L, 6) == fast_product(x, y, L, 6)
