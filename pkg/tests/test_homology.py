import pytest

from arithhom import homology as hom
from arithhom.abgrp import zero_hom
from arithhom.ffcurve import ff_h0
from arithhom.homology import (MV_FIELDS, check_dense_open_surjectivity, check_gysin,
                               check_mv_open_cover, check_mv_second_variable, ff_curve, homology,
                               number_ring, primes_above, pushforward_norm, random_dense_open_configs,
                               random_mv_base_configs, random_mv_cover_configs)
from arithhom.numfield import is_congruent_one, number_field
from arithhom.rayclass import modulus, relative_units


def test_homology_examples():
    r = homology(number_ring("Q"))
    assert r.h0.is_trivial and r.h1.invariants == (2,)
    r = homology(number_ring("Q", [2, 3]))
    assert r.h0.is_trivial and r.h1.is_trivial
    r = homology(number_ring("x^2+1"))
    assert r.h0.is_trivial and r.h1.invariants == (4,)


def test_homology_of_curve():
    r = homology(ff_curve(5))
    assert r.h0.invariants == (0,) and r.h1.invariants == (4,)
    r = homology(ff_curve(5, ["inf"]))
    assert r.h1.is_trivial


def test_mv_open_cover_examples():
    Q = number_field("Q")
    assert check_mv_open_cover(Q, modulus(Q, [2]), modulus(Q, [3])).exact
    assert check_mv_open_cover(Q, modulus(Q, []), modulus(Q, [])).exact
    K = number_field("x^2+5")
    assert check_mv_open_cover(K, modulus(K, ["2"]), modulus(K, ["3:0"])).exact


@pytest.mark.parametrize("field", MV_FIELDS)
def test_mv_open_cover_random(field):
    for K, s1, s2 in random_mv_cover_configs(field, n=8, seed=1):
        rep = check_mv_open_cover(K, s1, s2)
        assert rep.exact, rep.to_json()


def test_mv_second_variable_examples():
    assert check_mv_second_variable(number_ring("Q", [5]), [2], [3]).exact
    assert check_mv_second_variable(number_ring("Q", [5]), [], []).exact
    assert check_mv_second_variable(number_ring("x^2+1"), [5, 13], [2]).exact


@pytest.mark.parametrize("field", MV_FIELDS)
def test_mv_second_variable_random(field):
    for x, ru, rv in random_mv_base_configs(field, n=6, seed=1):
        rep = check_mv_second_variable(x, ru, rv)
        assert rep.exact, rep.to_json()


def test_zero_connecting_map_is_caught(monkeypatch):
    """Replacing the connecting map by zero must break exactness somewhere."""
    monkeypatch.setattr(hom, "_base_delta",
                        lambda K, sigma, AU, AV, src, tgt: zero_hom(src.group, tgt.group))
    failures = sum(not check_mv_second_variable(x, ru, rv).exact
                   for field in MV_FIELDS for x, ru, rv in random_mv_base_configs(field, n=20))
    assert failures > 0


def test_gysin_spec_z_minus_5():
    rep = check_gysin(number_ring("Q"), [5])
    assert rep.exact
    assert rep.groups == [[], [], [2], [4], [2], [], []]


def test_gysin_examples():
    assert check_gysin(number_ring("x^2+1"), ["5:0"]).exact
    assert check_gysin(ff_curve(3, ["inf"]), ["0"]).exact
    assert check_gysin(number_ring("x^2+5", ["2"]), ["3:0", "7:1"]).exact
    assert check_gysin(ff_curve(5, ["0", "inf"]), ["t^2+2", "1"]).exact


def test_gysin_rejects_empty_or_overlapping_d():
    with pytest.raises(ValueError):
        check_gysin(number_ring("Q"), [])
    with pytest.raises(ValueError):
        check_gysin(number_ring("Q", [5]), [5])


def test_pushforward_examples():
    pp = pushforward_norm(number_field("x^2+1"), [5])
    assert pp.composite_is_degree() and pp.push.compose(pp.pull).is_zero()
    assert pushforward_norm(number_field("x^2+1"), []).composite_is_degree()
    assert pushforward_norm(number_field("x^2+5"), []).composite_is_degree()


@pytest.mark.parametrize("field,sigma", [("x^2+1", [3, 5]), ("x^2+5", [3, 7]),
                                         ("x^2-2", [7]), ("x^2+2", [3, 11])])
def test_pushforward_composite_is_degree(field, sigma):
    assert pushforward_norm(number_field(field), sigma).composite_is_degree()


def test_dense_open_examples():
    assert check_dense_open_surjectivity(number_ring("Q", [5]), [7]).exact
    rep = check_dense_open_surjectivity(number_ring("Q", [5]), [])
    assert rep.exact and rep.groups[0] == rep.groups[1]
    assert check_dense_open_surjectivity(number_ring("x^2+1"), ["13:0"]).exact


def test_dense_open_random():
    for x, extra in random_dense_open_configs(n=10, seed=3):
        assert check_dense_open_surjectivity(x, extra).exact


@pytest.mark.parametrize("field", ["Q", "x^2+1", "x^2+5", "x^2-2", "x^2-5"])
def test_h0_finite(field):
    K = number_field(field)
    for rational in ([], [3], [2, 7]):
        assert homology(number_ring(K, primes_above(K, rational))).h0.is_finite


@pytest.mark.parametrize("q,sigma", [(2, ["inf"]), (3, ["0", "1", "inf"]), (4, ["t^2+t+2"]),
                                     (5, ["0", "t^2+2"])])
def test_ff_degree_zero_finite(q, sigma):
    G0, _ = ff_h0(q, sigma).degree_zero()
    assert G0.is_finite


@pytest.mark.parametrize("field,small,big", [("Q", [], [3]), ("x^2-2", [], ["7:1"]),
                                             ("x^2-2", ["7:0"], ["7:0", "7:1", "2"]),
                                             ("x^2-5", [], ["11:0"])])
def test_relative_units_shrink_with_sigma(field, small, big):
    K = number_field(field)
    ms, mb = modulus(K, small), modulus(K, big)
    for u in relative_units(K, mb).generators:
        assert all(is_congruent_one(u, P) for P in ms)
        assert all(is_congruent_one(u, P) for P in mb)
