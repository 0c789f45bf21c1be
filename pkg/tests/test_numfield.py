import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arithhom.numfield import (UnsupportedFieldError, dedekind_is_maximal, factor_element,
                               ideal_eq, ideal_from_factorization, ideal_from_gens, ideal_mul,
                               ideal_norm, number_field, prime_power, principal_ideal,
                               split_prime, unit_ideal, valuation)

FIELDS = ["Q", "x^2+1", "x^2+5", "x^2-2", "x^2-5", "x^2+2", "x^3-2", "x^4+1"]


def test_dedekind_examples():
    assert dedekind_is_maximal([1, 0, 1], 2)
    assert not dedekind_is_maximal([-5, 0, 1], 2)
    assert dedekind_is_maximal([5, 0, 1], 2)


def test_split_gaussian():
    K = number_field("x^2+1")
    five = split_prime(K, 5)
    assert len(five) == 2 and all(P.e == 1 and P.f == 1 for P in five)
    two = split_prime(K, 2)
    assert len(two) == 1 and two[0].e == 2 and two[0].f == 1


def test_split_sqrt_minus_5_at_3():
    primes = split_prime(number_field("x^2+5"), 3)
    assert [P.norm for P in primes] == [3, 3]


def test_x2_minus_5_uses_maximal_order():
    # Z[sqrt5] is not maximal at 2; the field code must still see 2 inert
    K = number_field("x^2-5")
    primes = split_prime(K, 2)
    assert len(primes) == 1 and primes[0].f == 2


def test_unsupported_field():
    with pytest.raises(UnsupportedFieldError):
        number_field("x^3-5*x^2+1000")


def test_principal_ideal_examples():
    Q = number_field("Q")
    fac = factor_element(Q.from_int(6))
    assert sorted((P.p, e) for P, e in fac.items()) == [(2, 1), (3, 1)]
    assert factor_element(Q.from_int(1)) == {}
    assert ideal_eq(principal_ideal(Q.from_int(1)), unit_ideal(Q))
    K = number_field("x^2+1")
    P2 = split_prime(K, 2)[0]
    assert valuation(K.elt([1, 1]), P2) == 1
    assert factor_element(K.elt([1, 1])) == {P2: 1}


@pytest.mark.parametrize("spec", FIELDS)
def test_prime_decomposition_reassembles(spec):
    K = number_field(spec)
    for p in [2, 3, 5, 7, 11, 13]:
        primes = split_prime(K, p)
        assert sum(P.e * P.f for P in primes) == K.degree
        prod = unit_ideal(K)
        for P in primes:
            prod = ideal_mul(prod, prime_power(P, P.e))
        assert ideal_eq(prod, principal_ideal(K.from_int(p)))


def random_integral(K, rnd, h=6):
    while True:
        a = K.elt([rnd.randint(-h, h) for _ in range(K.degree)])
        if not a.is_zero():
            return a


@pytest.mark.parametrize("spec", FIELDS[:6])
def test_norm_is_multiplicative(spec):
    K = number_field(spec)
    rnd = random.Random(spec)
    for _ in range(100):
        a = ideal_from_gens(K, [random_integral(K, rnd), random_integral(K, rnd)])
        b = ideal_from_gens(K, [random_integral(K, rnd)])
        assert ideal_norm(ideal_mul(a, b)) == ideal_norm(a) * ideal_norm(b)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS[:6]),
       st.lists(st.integers(-20, 20), min_size=4, max_size=4))
def test_valuation_additive_and_factorization_reproduces_ideal(spec, xs):
    K = number_field(spec)
    a, b = K.elt(xs[:K.degree]), K.elt(xs[2:2 + K.degree])
    if a.is_zero() or b.is_zero():
        return
    fa = factor_element(a)
    assert ideal_eq(ideal_from_factorization(K, fa), principal_ideal(a))
    ab = a * b
    for P in set(fa) | set(factor_element(b)):
        assert valuation(ab, P) == valuation(a, P) + valuation(b, P)
    assert abs(a.norm()) == ideal_norm(principal_ideal(a))


def test_element_norm_matches_rational_value():
    K = number_field("x^2+1")
    assert K.elt([3, 4]).norm() == Fraction(25)
