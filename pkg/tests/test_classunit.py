import math
import random
from math import gcd, isqrt

import pytest

from arithhom.classunit import class_group, fundamental_unit, is_principal, unit_group
from arithhom.numfield import (ideal_mul, number_field, principal_ideal, split_prime,
                               unit_ideal, primes_up_to)


def reduced_form_count(D: int) -> int:
    """Number of reduced primitive positive definite forms ax^2+bxy+cy^2 of discriminant D."""
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or gcd(gcd(a, abs(b)), c) != 1:
                continue
            if b < 0 and a == c:
                continue
            count += 1
        a += 1
    return count


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt(d)) for squarefree d."""
    return d if d % 4 == 1 else 4 * d


@pytest.mark.parametrize("d", [1, 2, 3, 5, 6, 7, 10, 11])
def test_imaginary_class_numbers_match_reduced_forms(d):
    K = number_field(f"x^2+{d}")
    assert class_group(K).order == reduced_form_count(fundamental_discriminant(-d))


def test_reduced_form_oracle_sanity():
    assert [reduced_form_count(D) for D in (-3, -4, -20, -23, -47)] == [1, 1, 2, 3, 5]


def test_class_group_examples():
    assert class_group(number_field("x^2+1")).order == 1
    assert class_group(number_field("x^2+5")).orders == (2,)
    assert class_group(number_field("x^2-2")).order == 1


def test_class_of_is_additive():
    K = number_field("x^2+14")
    cg = class_group(K)
    G = cg.group
    primes = [P for P in primes_up_to(K, 40)]
    rnd = random.Random(14)
    for _ in range(30):
        P, Q = rnd.choice(primes), rnd.choice(primes)
        lhs = cg.class_of(ideal_mul(P.ideal, Q.ideal))
        rhs = [a + b for a, b in zip(cg.class_of(P.ideal), cg.class_of(Q.ideal))]
        assert G.equal(lhs, rhs)


def test_is_principal_examples():
    K = number_field("x^2+1")
    g = is_principal(principal_ideal(K.from_int(2)))
    assert g is not None and abs(g.norm()) == 4
    assert is_principal(split_prime(number_field("x^2+5"), 2)[0].ideal) is None
    one = is_principal(unit_ideal(K))
    assert one is not None and abs(one.norm()) == 1


def test_unit_groups_small():
    U = unit_group(number_field("Q"))
    assert U.torsion_order == 2 and U.rank == 0 and U.torsion_gen == number_field("Q").from_int(-1)
    U = unit_group(number_field("x^2+1"))
    assert U.torsion_order == 4
    U = unit_group(number_field("x^2+3"))
    assert U.torsion_order == 6
    K = number_field("x^2-2")
    assert fundamental_unit(K) == K.elt([1, 1])


@pytest.mark.parametrize("spec", ["Q", "x^2+1", "x^2+3", "x^2-2", "x^2-3", "x^2-5", "x^2+5"])
def test_torsion_generator_has_exact_order(spec):
    U = unit_group(number_field(spec))
    w, z = U.torsion_order, U.torsion_gen
    assert z ** w == U.field.one
    for q in (2, 3):
        if w % q == 0:
            assert z ** (w // q) != U.field.one
    for e in U.fundamental_units:
        assert abs(e.norm()) == 1


def smallest_pell_unit(d: int) -> float:
    """Smallest unit > 1 of the ring of integers of Q(sqrt d), by direct search."""
    scale = 2 if d % 4 == 1 else 1
    for y in range(1, 10 ** 5):
        for sign in (-1, 1):
            x2 = d * y * y + sign * scale * scale
            x = isqrt(x2)
            if x > 0 and x * x == x2:
                return (x + y * math.sqrt(d)) / scale
    raise AssertionError("no unit found")


@pytest.mark.parametrize("d", [2, 3, 5, 6, 7, 13, 19, 29, 79])
def test_fundamental_unit_matches_pell_search(d):
    K = number_field(f"x^2-{d}")
    eps = fundamental_unit(K)
    assert abs(eps.norm()) == 1
    val = max(abs(v) for v in (z.real for z in eps.embeddings()))
    assert math.isclose(val, smallest_pell_unit(d), rel_tol=1e-9)
