import itertools

import pytest
import sympy

from arithhom.cft import random_unit_witnesses
from arithhom.cycles import (CycleError, RelationWitness, ZeroCycle, boundary_d1, class_of_cycle,
                             div_of_element, horizontal_cycle, oracle_h0, prime_cycle,
                             vertical_cycle)
from arithhom.numfield import number_field, split_prime
from arithhom.rayclass import modulus, ray_class_group

Q = number_field("Q")


def pc(*pairs):
    out = ZeroCycle(())
    for p, n in pairs:
        out = out + prime_cycle(Q, p, n)
    return out


def test_div_of_element_examples():
    assert div_of_element(RelationWitness(Q.from_int(6), modulus(Q, [5]))) == pc((2, 1), (3, 1))
    assert div_of_element(RelationWitness(Q.one, modulus(Q, []))).is_zero()
    K = number_field("x^2+1")
    c = div_of_element(RelationWitness(K.elt([1, 1]), modulus(K, [])))
    assert c.as_dict() == {split_prime(K, 2)[0]: 1}


def test_witness_must_be_one_mod_sigma():
    with pytest.raises(CycleError):
        div_of_element(RelationWitness(Q.from_int(2), modulus(Q, [5])))


def test_class_of_cycle_examples():
    m = modulus(Q, [5])
    G = ray_class_group(Q, m).group
    assert not G.is_zero(class_of_cycle(pc((2, 1)), m))
    assert G.is_zero(class_of_cycle(pc((11, 1)), m))
    assert G.is_zero(class_of_cycle(pc((2, 1), (3, 1)), m))


def test_cycle_meeting_sigma_rejected():
    with pytest.raises(CycleError):
        ZeroCycle.from_dict({split_prime(Q, 5)[0]: 1}, modulus(Q, [5]))


def test_boundary_examples():
    empty, five = modulus(Q, []), modulus(Q, [5])
    assert boundary_d1(horizontal_cycle([2, 1], empty), empty) == pc((2, 1), (3, -1))
    assert boundary_d1(vertical_cycle(7, empty), empty).is_zero()
    assert boundary_d1(horizontal_cycle([3, 5, 5], five), five) == pc((3, 1), (13, -1))
    for g in ([3, 2], [3, 4]):
        with pytest.raises(CycleError):
            horizontal_cycle(g, five)


def test_vertical_fibre_in_sigma_rejected():
    with pytest.raises(CycleError):
        vertical_cycle(5, modulus(Q, [5]))


@pytest.mark.parametrize("primes", [(5,), (2, 3), (7,), (3, 5), (2, 5, 7)])
def test_divisors_of_one_units_are_trivial(primes):
    m = modulus(Q, primes)
    G = ray_class_group(Q, m).group
    N = 1
    for p in primes:
        N *= p
    for a in random_unit_witnesses(N, n=100, seed=len(primes)):
        c = div_of_element(RelationWitness(Q.from_int(a), m))
        assert G.is_zero(class_of_cycle(c, m))


def enumerate_horizontal(sigma, deg, H):
    # curves avoiding the fibres over Sigma have g = const mod every p in Sigma
    N = 1
    for P in sigma:
        N *= P.p
    for c0, *rest in itertools.product(range(-H, H + 1), repeat=deg + 1):
        try:
            yield horizontal_cycle([c0] + [N * c for c in rest], sigma)
        except CycleError:
            continue


@pytest.mark.parametrize("primes", [(), (5,), (2, 3), (7,)])
def test_boundaries_are_trivial(primes):
    m = modulus(Q, primes)
    G = ray_class_group(Q, m).group
    count = 0
    for z in enumerate_horizontal(m, 2, 4):
        assert G.is_zero(class_of_cycle(boundary_d1(z, m), m))
        count += 1
    assert count > 20
    for p in sympy.primerange(2, 30):
        if p not in primes:
            assert boundary_d1(vertical_cycle(p, m), m).is_zero()


def test_oracle_examples():
    r = oracle_h0(Q, modulus(Q, [5]), deg_bound=2, height_bound=200, prime_bound=50)
    assert r.group.order == 2 and r.matches_rayclass
    r = oracle_h0(Q, modulus(Q, []), deg_bound=1, height_bound=20, prime_bound=20)
    assert r.group.is_trivial and r.matches_rayclass
    r = oracle_h0(Q, modulus(Q, [2, 3]), deg_bound=2, height_bound=300, prime_bound=50)
    assert r.group.is_trivial and r.matches_rayclass


@pytest.mark.parametrize("primes", [(5,), (2, 3)])
def test_oracle_shrinks_as_bounds_grow(primes):
    m = modulus(Q, primes)
    sizes = []
    for H in (10, 40, 160):
        r = oracle_h0(Q, m, deg_bound=2, height_bound=H, prime_bound=30)
        sizes.append(r.group)
    for small, big in zip(sizes[1:], sizes):
        if big.is_finite:
            assert small.is_finite and big.order % small.order == 0
    assert sizes[-1].order == ray_class_group(Q, m).group.order


def test_oracle_rejects_other_fields():
    K = number_field("x^2+1")
    with pytest.raises(CycleError):
        oracle_h0(K, modulus(K, []))
