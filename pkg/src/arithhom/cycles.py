"""Zero-cycles, principal relations and a brute-force presentation of h_0.

The oracle builds h_0(Spec Z[1/m]) directly from cycles: generators are the
primes up to a bound, relations are boundaries ``div(g(0)) - div(g(1))`` of
curves ``g(t) = 0`` in ``X x A^1`` that avoid the fibres over ``m`` and do not
contain a face.  It never looks at the ray class group except to compare.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Sequence

import sympy

from .abgrp import FGAbelianGroup, GroupHom, IntMatrix, group_from_relations, lattice_basis
from .numfield import (FieldElement, NumberField, PrimeIdealRec, factor_element,
                       is_congruent_one, number_field, split_prime)
from .rayclass import Modulus, ray_class_group


class CycleError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# zero-cycles


@dataclass(frozen=True)
class ZeroCycle:
    """Finite integer combination of closed points, stored as sorted pairs."""

    terms: tuple

    @classmethod
    def from_dict(cls, d: dict, sigma: Iterable = ()) -> ZeroCycle:
        sigma = set(sigma)
        for P, v in d.items():
            if v and P in sigma:
                raise CycleError(f"cycle meets Sigma at {P}")
        items = [(P, int(v)) for P, v in d.items() if v]
        return cls(tuple(sorted(items, key=lambda t: _point_key(t[0]))))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: ZeroCycle) -> ZeroCycle:
        d = self.as_dict()
        for P, v in other.terms:
            d[P] = d.get(P, 0) + v
        return ZeroCycle.from_dict(d)

    def __neg__(self) -> ZeroCycle:
        return ZeroCycle(tuple((P, -v) for P, v in self.terms))

    def __sub__(self, other: ZeroCycle) -> ZeroCycle:
        return self + (-other)

    def scale(self, k: int) -> ZeroCycle:
        return ZeroCycle.from_dict({P: k * v for P, v in self.terms})

    def is_zero(self) -> bool:
        return not self.terms


def _point_key(P):
    if isinstance(P, PrimeIdealRec):
        return (P.p, P.index)
    return (str(P),)


def prime_cycle(K: NumberField, sel: str | int, n: int = 1) -> ZeroCycle:
    from .numfield import parse_prime
    return ZeroCycle.from_dict({parse_prime(K, str(sel)): n})


# ---------------------------------------------------------------------------
# relations from functions


@dataclass(frozen=True)
class RelationWitness:
    """A nonzero element ``f`` that is congruent to 1 at every prime of ``sigma``."""

    f: FieldElement
    sigma: Modulus

    def check(self) -> None:
        if self.f.is_zero():
            raise CycleError("relation witness is zero")
        for P in self.sigma:
            if not is_congruent_one(self.f, P):
                raise CycleError(f"witness is not congruent to 1 at {P.selector}")


def div_of_element(w: RelationWitness) -> ZeroCycle:
    """``div(f)``; its support avoids ``sigma`` because f is a unit there."""
    w.check()
    return ZeroCycle.from_dict(factor_element(w.f), w.sigma)


def class_of_cycle(c: ZeroCycle, sigma: Modulus) -> tuple[int, ...]:
    """Image of a zero-cycle in ``C_m(k)`` (generator coordinates)."""
    rc = ray_class_group(sigma.field, sigma)
    d = c.as_dict()
    for P in d:
        if P in sigma:
            raise CycleError(f"cycle meets Sigma at {P.selector}")
    return rc.class_of_factorization(d)


# ---------------------------------------------------------------------------
# one-cycles over Q


def _sigma_primes(sigma: Modulus) -> list[int]:
    return [P.p for P in sigma]


@dataclass(frozen=True)
class SimplicialOneCycle:
    """An integral curve in ``Spec Z[1/m] x Delta^1``.

    Horizontal: an irreducible primitive integer polynomial ``g(t)`` (low
    degree first).  Vertical: the fibre over a prime ``p``.
    """

    g: tuple[int, ...] | None = None
    p: int | None = None

    @property
    def is_vertical(self) -> bool:
        return self.p is not None


def horizontal_cycle(g: Sequence[int], sigma: Modulus) -> SimplicialOneCycle:
    g = list(g)
    while g and g[-1] == 0:
        g.pop()
    if len(g) < 2:
        raise CycleError("a horizontal cycle needs a polynomial of degree >= 1")
    if g[-1] < 0:
        g = [-c for c in g]
    if gcd(*g) != 1:
        raise CycleError(f"polynomial {g} is not primitive")
    if g in ([0, 1], [-1, 1]):
        raise CycleError("the cycle is a face of Delta^1")
    if g[0] == 0 or sum(g) == 0:
        raise CycleError("the cycle meets a face improperly (g(0) = 0 or g(1) = 0)")
    for p in _sigma_primes(sigma):
        if any(c % p for c in g[1:]) or g[0] % p == 0:
            raise CycleError(f"the cycle meets the fibre over {p} in Sigma")
    t = sympy.Symbol("t")
    if len(g) > 2 and not sympy.Poly(list(reversed(g)), t).is_irreducible:
        raise CycleError(f"polynomial {g} is reducible over Q")
    return SimplicialOneCycle(g=tuple(g))


def vertical_cycle(p: int, sigma: Modulus) -> SimplicialOneCycle:
    if not sympy.isprime(p):
        raise CycleError(f"{p} is not prime")
    if p in _sigma_primes(sigma):
        raise CycleError(f"the fibre over {p} is not in X")
    return SimplicialOneCycle(p=p)


def _int_cycle(n: int) -> dict:
    K = number_field("Q")
    return {split_prime(K, p)[0]: e for p, e in sympy.factorint(abs(n)).items()}


def boundary_d1(z: SimplicialOneCycle, sigma: Modulus) -> ZeroCycle:
    """``d_1(Z) = Z|_{t=0} - Z|_{t=1}``."""
    if z.is_vertical:
        return ZeroCycle(())
    g = z.g
    c0, c1 = g[0], sum(g)
    d = _int_cycle(c0)
    for P, e in _int_cycle(c1).items():
        d[P] = d.get(P, 0) - e
    return ZeroCycle.from_dict(d, sigma)


# ---------------------------------------------------------------------------
# the oracle


def _smooth_numbers(primes: Sequence[int], bound: int) -> list[int]:
    out = [1]
    for p in primes:
        nxt = []
        for n in out:
            x = n
            while x <= bound:
                nxt.append(x)
                x *= p
        out = nxt
    return sorted(out)


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _witness(c: int, s: int, m: int, deg_bound: int, H: int) -> tuple[int, ...] | None:
    """A polynomial of degree <= deg_bound, height <= H, with g(0)=c, g(1)=s,
    whose reduction mod every prime of m is the constant c."""
    b = s - c
    if deg_bound >= 1 and b != 0 and abs(b) <= H and abs(c) <= H and b % m == 0 and gcd(c, s) == 1:
        return (c, b) if b > 0 else (-c, -b)
    if deg_bound >= 2 and abs(c) <= H:
        for k in range(1, H // m + 1):
            for a in (k * m, -k * m):
                b = s - c - a
                if abs(b) > H or gcd(gcd(a, b), c) != 1:
                    continue
                if _is_square(b * b - 4 * a * c):
                    continue
                return (c, b, a) if a > 0 else (-c, -b, -a)
    return None


class _LatticeBuilder:
    """Incrementally maintained column HNF of a relation lattice."""

    def __init__(self, n: int):
        self.n = n
        self.cols: list[list[int]] = []
        self.pivots: list[int] = []

    def reduce(self, v: list[int]) -> list[int]:
        v = list(v)
        for col, r in zip(self.cols, self.pivots):
            if v[r]:
                q = v[r] // col[r]
                if q:
                    v = [a - q * b for a, b in zip(v, col)]
        return v

    def add(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        if not any(w):
            return False
        basis = lattice_basis(IntMatrix.from_columns(self.cols + [w], self.n))
        self.cols = [list(c) for c in basis.columns()]
        self.pivots = [next(i for i, x in enumerate(c) if x) for c in self.cols]
        return True


@dataclass
class OracleResult:
    group: FGAbelianGroup
    primes: tuple[int, ...]
    relations_used: int
    stable: bool
    comparison: GroupHom
    matches_rayclass: bool
    sigma: Modulus

    def to_json(self) -> dict:
        return {"invariants": list(self.group.torsion_invariants) + [0] * self.group.free_rank,
                "relations_used": self.relations_used,
                "stable": self.stable,
                "matches_rayclass": self.matches_rayclass}


def _oracle_presentation(sigma_primes: Sequence[int], deg_bound: int, height_bound: int,
                         prime_bound: int, budget: int) -> tuple[FGAbelianGroup, list[int], int]:
    m = 1
    for p in sigma_primes:
        m *= p
    gens = [p for p in sympy.primerange(2, prime_bound + 1) if p not in sigma_primes]
    index = {p: i for i, p in enumerate(gens)}
    n = len(gens)
    H = height_bound
    smooth_c = _smooth_numbers(gens, H)
    smooth_s = _smooth_numbers(gens, (deg_bound + 1) * H)
    if len(smooth_c) * len(smooth_s) * 2 > budget:
        raise BudgetExceededError(
            f"{len(smooth_c) * len(smooth_s) * 2} face-value pairs exceed the budget of {budget}")
    vecs = {x: _exponents(x, gens, index) for x in smooth_s}
    lat = _LatticeBuilder(n)
    used = set()
    for c in smooth_c:
        for s_abs in smooth_s:
            if s_abs == c:
                continue
            for s in (s_abs, -s_abs):
                if any((s - c) % p for p in sigma_primes):
                    continue
                if _witness(c, s, m, deg_bound, H) is None:
                    continue
                rel = tuple(a - b for a, b in zip(vecs[c], vecs[s_abs]))
                if rel not in used:
                    used.add(rel)
                    lat.add(rel)
    rels = IntMatrix.from_columns([tuple(c) for c in lat.cols], n) if lat.cols else None
    return group_from_relations(n, rels), gens, len(used)


def _exponents(x: int, gens, index) -> tuple[int, ...]:
    v = [0] * len(gens)
    for p, e in sympy.factorint(x).items():
        v[index[p]] = e
    return tuple(v)


def oracle_h0(K: NumberField, sigma: Modulus, deg_bound: int = 2, height_bound: int = 300,
              prime_bound: int = 50, budget: int = 5 * 10 ** 6) -> OracleResult:
    """Present h_0 by generators and boundary relations, then compare with C_m."""
    if not K.is_rational:
        raise CycleError("the cycle oracle is implemented over Q only")
    if deg_bound < 1 or height_bound < 1 or prime_bound < 2:
        raise CycleError("oracle bounds must be positive")
    sp = sorted(_sigma_primes(sigma))
    G, gens, used = _oracle_presentation(sp, deg_bound, height_bound, prime_bound, budget)
    G_half, _, _ = _oracle_presentation(sp, deg_bound, max(1, height_bound // 2), prime_bound, budget)
    stable = G_half.invariants == G.invariants
    rc = ray_class_group(K, sigma)
    cols = [rc.class_of_prime(split_prime(K, p)[0]) for p in gens]
    comp = GroupHom(G, rc.group, IntMatrix.from_columns(cols, rc.ngens) if cols else IntMatrix.zero(rc.ngens, 0))
    return OracleResult(G, tuple(gens), used, stable, comp, comp.is_isomorphism(), sigma)
