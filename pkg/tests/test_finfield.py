import itertools

import pytest
from hypothesis import given, settings, strategies as st

from arithhom.finfield import (PrimeField, factor_poly, factor_poly_mod_p, finite_field,
                               is_irreducible, monic_irreducibles, poly_mul, poly_trim)


def roots_mod_p(f, p):
    return [x for x in range(p) if sum(c * x ** i for i, c in enumerate(f)) % p == 0]


def test_factor_x2_plus_1():
    assert factor_poly_mod_p([1, 0, 1], 5) == [([2, 1], 1), ([3, 1], 1)]
    assert factor_poly_mod_p([1, 0, 1], 2) == [([1, 1], 2)]
    assert factor_poly_mod_p([1, 0, 1], 3) == [([1, 0, 1], 1)]
    assert roots_mod_p([1, 0, 1], 5) == [2, 3]
    assert roots_mod_p([1, 0, 1], 3) == []


def test_factor_rejects_composite_modulus():
    with pytest.raises(ValueError):
        factor_poly_mod_p([1, 0, 1], 6)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11]),
       st.lists(st.integers(0, 10), min_size=2, max_size=7))
def test_factorization_multiplies_back(p, coeffs):
    F = PrimeField(p)
    f = poly_trim(F, [c % p for c in coeffs])
    if len(f) < 2:
        return
    inv = pow(f[-1], -1, p)
    monic = [c * inv % p for c in f]
    prod = [1]
    for g, e in factor_poly(F, monic):
        assert is_irreducible(F, g)
        for _ in range(e):
            prod = poly_mul(F, prod, g)
    assert prod == monic


def test_irreducible_counts_match_necklace_formula():
    # number of monic irreducibles of degree d over F_p is (1/d) sum_{k|d} mu(k) p^(d/k)
    from sympy import divisors, mobius
    for p, d in itertools.product([2, 3], [1, 2, 3, 4]):
        expected = sum(mobius(k) * p ** (d // k) for k in divisors(d)) // d
        assert len(list(monic_irreducibles(PrimeField(p), d))) == expected


@pytest.mark.parametrize("q", [4, 8, 9, 25, 27])
def test_extension_field_units(q):
    F = finite_field(q)
    g = F.primitive_element
    seen = set()
    x = F.one
    for _ in range(q - 1):
        seen.add(x)
        x = F.mul(x, g)
    assert x == F.one and len(seen) == q - 1
    for a in list(F.elements())[1:12]:
        assert F.pow(g, F.dlog(a)) == a
        assert F.mul(a, F.inv(a)) == F.one


def test_finite_field_rejects_non_prime_power():
    with pytest.raises(ValueError):
        finite_field(12)
