import random
from math import gcd

import pytest
import sympy

from arithhom.abgrp import is_exact, zero_hom, trivial
from arithhom.numfield import number_field
from arithhom.rayclass import (ModulusError, modulus, parse_sigma, ray_class_group,
                               relative_units, residue_units)

Q = number_field("Q")


def units_mod_sign(m: int) -> int:
    if m <= 2:
        return 1
    return len({min(a, m - a) for a in range(1, m) if gcd(a, m) == 1})


def test_residue_unit_examples():
    r = residue_units(Q, modulus(Q, [5]))
    assert r.orders == [4]
    assert r.generator_residues() == [(2,)]
    assert residue_units(Q, modulus(Q, [2, 3])).orders == [1, 2]
    K = number_field("x^2+1")
    assert residue_units(K, modulus(K, ["2"])).group.is_trivial


def test_ray_class_examples():
    assert ray_class_group(Q, [5]).group.invariants == (2,)
    assert ray_class_group(Q, []).group.is_trivial
    assert ray_class_group(number_field("x^2+5"), []).group.invariants == (2,)


def test_relative_unit_examples():
    ru = relative_units(Q, [])
    assert ru.group.invariants == (2,)
    assert ru.generators[0] == Q.from_int(-1)
    assert relative_units(Q, [2, 3]).group.is_trivial
    assert relative_units(number_field("x^2-2"), []).group.invariants == (2, 0)


def test_repeated_prime_rejected():
    with pytest.raises(ModulusError, match="squarefree"):
        parse_sigma(Q, "5,5")


@pytest.mark.parametrize("m", [m for m in range(1, 61) if sympy.factorint(m) and
                               all(e == 1 for e in sympy.factorint(m).values())])
def test_rational_ray_class_order(m):
    g = ray_class_group(Q, sorted(sympy.factorint(m))).group
    assert g.is_finite and g.order == units_mod_sign(m)


CONFIGS = [("Q", "5"), ("Q", "2,3,7"), ("x^2+1", "5:0,3"), ("x^2+5", "3:0,7:1"),
           ("x^2-2", "7:0"), ("x^2+14", "3:1")]


@pytest.mark.parametrize("field,sigma", CONFIGS)
def test_principal_ideals_congruent_to_one_are_trivial(field, sigma):
    K = number_field(field)
    m = parse_sigma(K, sigma)
    rc = ray_class_group(K, m)
    N = 1
    for p in {P.p for P in m}:
        N *= p
    rnd = random.Random(f"{field}|{sigma}")
    checked = 0
    while checked < 50:
        x = K.elt([rnd.randint(-5, 5) for _ in range(K.degree)])
        a = K.one + x * K.from_int(N)
        if a.is_zero():
            continue
        assert rc.is_identity(rc.class_of_element(a))
        checked += 1


@pytest.mark.parametrize("field,sigma", CONFIGS)
def test_defining_sequence_is_exact(field, sigma):
    K = number_field(field)
    rc = ray_class_group(K, parse_sigma(K, sigma))
    cl = rc.classgroup.group
    seq = [rc.unit_hom(), rc.residue_hom(), rc.class_projection(), zero_hom(cl, trivial())]
    assert is_exact(seq).exact
    assert rc.group.is_finite


def test_class_of_generator_matches_residue():
    rc = ray_class_group(Q, [5])
    two = rc.class_of_element(Q.from_int(2))
    eleven = rc.class_of_element(Q.from_int(11))
    assert not rc.is_identity(two)
    assert rc.is_identity(eleven)
