"""Reciprocity: Frobenius elements against h_0, over Q and over F_q(t).

Over ``Q`` the Galois side of ``Spec Z[1/m]`` is modelled by
``(Z/m)^x / {+-1}`` with ``Frob_p = p mod m``; it is computed from discrete
logarithms modulo each prime of ``m`` and never touches ideal arithmetic.

Over ``F_q(t)`` the abelian tame Galois group of ``P^1 - Sigma`` is
``T x Zhat`` with ``T = (prod_{P in Sigma} k(P)^x) / F_q^x``.  A finite place
with monic polynomial ``pi`` has Frobenius ``((pi mod P)_P, deg pi)``, where the
entry at an infinite place of Sigma is 1 since ``pi`` is monic.  ``Zhat`` and
``Zhat/Z`` are symbolic; only the integer degree is ever computed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import sympy
from sympy.ntheory import discrete_log, primitive_root

from .abgrp import FGAbelianGroup, GroupHom, IntMatrix, free, group_from_relations, hom_kernel
from .cycles import ZeroCycle, oracle_h0
from .ffcurve import (Place, base_field, ff_h0, parse_places, places_of_degree,
                      residue_field, value_at)
from .numfield import number_field
from .rayclass import modulus, ray_class_group

ZHAT = "Zhat"
ZHAT_MOD_Z = "Zhat/Z"


class ReciprocityError(ValueError):
    pass


@dataclass
class ReciprocityReport:
    injective: bool
    surjective: bool
    kernel_witness: list | None = None
    cokernel: str | list | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.injective and self.surjective

    def to_json(self) -> dict:
        return {"injective": self.injective, "surjective": self.surjective,
                "kernel_witness": self.kernel_witness, "cokernel": self.cokernel,
                **self.details}


# ---------------------------------------------------------------------------
# over Q


def _squarefree_primes(m: int) -> list[int]:
    if m < 1:
        raise ReciprocityError(f"modulus {m} must be a positive integer")
    fac = sympy.factorint(m)
    if any(e > 1 for e in fac.values()):
        raise ReciprocityError(f"modulus {m} is not squarefree")
    return sorted(fac)


def _cyclic_factors(m: int) -> list[tuple[int, int, int]]:
    """``(Z/m)^x`` as a product of cyclic groups: ``(modulus, generator, order)``.

    For ``2^k`` with ``k >= 3`` the factors are ``<-1>`` and ``<5>``; every
    other prime power has a primitive root.
    """
    out = []
    for p, k in sorted(sympy.factorint(m).items()):
        pk = p ** k
        if p == 2 and k >= 3:
            out.append((pk, -1, 2))
            out.append((pk, 5, 2 ** (k - 2)))
        elif pk > 2:
            out.append((pk, primitive_root(pk), sympy.totient(pk)))
    return out


@dataclass(frozen=True, eq=False)
class TameGaloisQ:
    """``(Z/m)^x / {+-1}`` presented on the cyclic factors of ``(Z/m)^x``."""

    m: int
    primes: tuple[int, ...]
    factors: tuple[tuple[int, int, int], ...]
    group: FGAbelianGroup = None

    def frobenius_of(self, a: int) -> tuple[int, ...]:
        """Class of ``a mod m`` (``a`` a nonzero integer prime to ``m``)."""
        if a == 0 or sympy.gcd(a, self.m) != 1:
            raise ReciprocityError(f"{a} is not prime to {self.m}")
        out = []
        sign = 0
        for pk, g, _ in self.factors:
            if g == -1:
                sign = 0 if a % 4 == 1 else 1
                out.append(sign)
            elif pk % 2 == 0 and pk >= 8:
                out.append(discrete_log(pk, (a * (-1) ** sign) % pk, g))
            else:
                out.append(discrete_log(pk, a % pk, g))
        return tuple(out)

    def order(self) -> int:
        return self.group.order


@lru_cache(maxsize=None)
def tame_galois_Q(m: int) -> TameGaloisQ:
    """Galois model for ``Spec Z[1/m]``; ``m`` need not be squarefree here."""
    if m < 1:
        raise ReciprocityError(f"modulus {m} must be a positive integer")
    factors = tuple(_cyclic_factors(m))
    T = TameGaloisQ(m, tuple(sorted(sympy.factorint(m))), factors)
    n = len(factors)
    rels = [tuple(o * int(i == j) for i in range(n)) for j, (_, _, o) in enumerate(factors)]
    if n:
        rels.append(T.frobenius_of(-1))
    object.__setattr__(T, "group", group_from_relations(n, IntMatrix.from_columns(rels, n) if n else None))
    return T


def rec_Q(m: int, c: ZeroCycle | dict) -> tuple[int, ...]:
    """``sum n_i Frob_{p_i}`` for a zero-cycle on ``Spec Z[1/m]``."""
    T = tame_galois_Q(m)
    terms = c.terms if isinstance(c, ZeroCycle) else tuple(c.items())
    vec = [0] * len(T.factors)
    for P, n in terms:
        p = P.p if hasattr(P, "p") else int(P)
        if m % p == 0:
            raise ReciprocityError(f"cycle meets the removed prime {p}")
        vec = [a + n * b for a, b in zip(vec, T.frobenius_of(p))]
    return tuple(vec)


def principal_cycle(f: Fraction | int) -> dict:
    """``div(f)`` over Q as a dict on rational primes."""
    f = Fraction(f)
    out: dict = {}
    for p, e in sympy.factorint(abs(f.numerator)).items():
        out[p] = out.get(p, 0) + e
    for p, e in sympy.factorint(f.denominator).items():
        out[p] = out.get(p, 0) - e
    return out


def random_unit_witnesses(m: int, n: int = 100, seed: int = 0, height: int = 10 ** 6) -> list:
    """Rationals ``f`` congruent to 1 modulo every prime of ``m``."""
    rng = random.Random(f"witness:{m}:{seed}")
    out = []
    while len(out) < n:
        b = rng.randint(1, height)
        if sympy.gcd(b, m) != 1:
            continue
        a = b + m * rng.randint(-height // m, height // m)
        if a == 0 or sympy.gcd(a, m) != 1:
            continue
        out.append(Fraction(a, b))
    return out


def _crt_lift(targets: Sequence[tuple[int, int]]) -> int:
    from sympy.ntheory.modular import crt
    if not targets:
        return 1
    return int(crt([p for p, _ in targets], [t for _, t in targets])[0])


def verify_reciprocity_Q(m: int, oracle: bool = False) -> ReciprocityReport:
    """``h_0(Spec Z[1/m]) -> (Z/m)^x/{+-1}``, ``[p] -> p mod m``, is an isomorphism.

    The ray-class generator at ``p | m`` is the class of ``(b)`` for a positive
    integer ``b`` with ``b = g_p mod p`` and ``b = 1`` at the other primes of m;
    its image is ``Frob`` of the cycle ``div(b)``.
    """
    primes = _squarefree_primes(m)
    Q = number_field("Q")
    R = ray_class_group(Q, modulus(Q, primes))
    T = tame_galois_Q(m)
    cols = []
    for P in R.modulus:
        g = int(P.residue_field.primitive_element[0])
        b = _crt_lift([(P.p, g)] + [(p, 1) for p in primes if p != P.p])
        cols.append(rec_Q(m, principal_cycle(b)))
    h = GroupHom(R.group, T.group, IntMatrix.from_columns(cols, T.group.ngens))
    ker, inc = hom_kernel(h)
    wit = None
    for c in inc.matrix.columns():
        if not R.group.is_zero(c):
            wit = list(c)
            break
    coker = h.cokernel()
    details = {"m": m, "h0": R.group.to_json(), "galois": T.group.to_json(),
               "order": T.group.order}
    if oracle:
        res = oracle_h0(Q, R.modulus)
        direct = GroupHom(res.group, T.group,
                          IntMatrix.from_columns([T.frobenius_of(p) for p in res.primes], T.group.ngens)
                          if res.primes else IntMatrix.zero(T.group.ngens, 0))
        details["oracle_agrees"] = direct.equals(h.compose(res.comparison)) and direct.is_isomorphism()
    return ReciprocityReport(h.is_injective(), h.is_surjective(), wit,
                             list(coker.torsion_invariants) + [0] * coker.free_rank, details)


def frobenius_order(m: int, p: int) -> int | None:
    T = tame_galois_Q(m)
    return T.group.element_order(rec_Q(m, {p: 1}))


def residue_order(m: int, p: int) -> int:
    """Order of ``p`` in ``(Z/m)^x / {+-1}`` by direct multiplication."""
    k, x = 1, p % m
    while x not in (1 % m, (-1) % m):
        x = x * p % m
        k += 1
    return k


# ---------------------------------------------------------------------------
# over F_q(t)


def _constant_generator(F):
    """A generator of ``F_q^x`` by brute force."""
    q = F.q
    for i in range(1, q):
        c = F.from_int(i)
        x, k = c, 1
        while x != F.one:
            x = F.mul(x, c)
            k += 1
        if k == q - 1:
            return c
    raise AssertionError("no generator of F_q^x")


@dataclass(frozen=True, eq=False)
class TameGaloisFF:
    """``T x Zhat``; only ``T`` (the degree-zero part) is a finite group here."""

    q: int
    sigma: tuple[Place, ...]
    degree_zero_part: FGAbelianGroup
    degree_part: str = ZHAT

    @property
    def F(self):
        return base_field(self.q)

    def frobenius_of(self, x: Place) -> tuple[tuple[int, ...], int]:
        """``(T-coordinates, degree)`` of ``Frob_x`` for a place off Sigma."""
        if x in self.sigma:
            raise ReciprocityError(f"{x.format(self.F)} lies in Sigma")
        F = self.F
        vec = []
        for P in self.sigma:
            if P.is_infinite or x.is_infinite:
                vec.append(0)
            else:
                k = residue_field(F, P)
                vec.append(k.dlog(value_at(F, list(x.poly), [F.one], P)))
        return tuple(vec), x.degree

    def rec(self, D: dict) -> tuple[tuple[int, ...], int]:
        vec = [0] * len(self.sigma)
        deg = 0
        for x, n in D.items():
            v, d = self.frobenius_of(x)
            vec = [a + n * b for a, b in zip(vec, v)]
            deg += n * d
        return tuple(vec), deg


def tame_galois_ff(q: int, sigma: Iterable = ()) -> TameGaloisFF:
    F = base_field(q)
    sigma = parse_places(F, sigma)
    n = len(sigma)
    rels = [tuple((q ** P.degree - 1) * int(i == j) for i in range(n)) for j, P in enumerate(sigma)]
    if n:
        c = _constant_generator(F)
        rels.append(tuple(residue_field(F, P).dlog(residue_field(F, P).embed(c)) for P in sigma))
    T = group_from_relations(n, IntMatrix.from_columns(rels, n) if n else None)
    return TameGaloisFF(q, sigma, T)


def verify_ff_rec0(q: int, sigma: Iterable = (), max_degree: int = 6) -> ReciprocityReport:
    """Reciprocity for ``P^1_{F_q} - Sigma`` on places of small degree.

    Places off Sigma of degree up to ``d`` give a free group mapping to
    ``h_0`` (divisor classes) and to ``T x Z`` (Frobenius).  ``d`` grows until
    the first map is onto; the induced ``h_0 -> T x Z`` must then be well
    defined and bijective, and it carries degree to degree.
    """
    F = base_field(q)
    sigma = parse_places(F, sigma)
    pic = ff_h0(F, sigma)
    gal = tame_galois_ff(q, sigma)
    T = gal.degree_zero_part
    target = group_from_relations(T.ngens + 1, IntMatrix.from_columns(
        [tuple(c) + (0,) for c in T.relations.columns()], T.ngens + 1) if T.ngens else None)
    places: list[Place] = []
    for d in range(1, max_degree + 1):
        places += [x for x in places_of_degree(F, d) if x not in sigma]
        free_src = free(len(places))
        to_h0 = GroupHom(free_src, pic.group, IntMatrix.from_columns(
            [pic.class_of({x: 1}) for x in places], pic.ngens))
        if to_h0.is_surjective():
            break
    else:
        raise ReciprocityError(f"places of degree <= {max_degree} do not generate h_0")
    frob = [gal.frobenius_of(x) for x in places]
    to_gal = GroupHom(free_src, target, IntMatrix.from_columns(
        [v + (deg,) for v, deg in frob], target.ngens))
    degree_ok = all(deg == x.degree for (_, deg), x in zip(frob, places))
    # the induced map exists iff ker(to_h0) dies in the target
    ker, inc = hom_kernel(to_h0)
    wit = None
    for c in inc.matrix.columns():
        if not target.is_zero(to_gal(c)):
            wit = list(c)
            break
    if wit is not None:
        return ReciprocityReport(False, False, wit, None,
                                 {"q": q, "well_defined": False, "degree_compatible": degree_ok})
    cols = []
    for j in range(pic.ngens):
        pre = to_h0.preimage(pic.group.gen(j))
        cols.append(to_gal(pre))
    rec = GroupHom(pic.group, target, IntMatrix.from_columns(cols, target.ngens))
    deg0, inc0 = pic.degree_zero()
    rec0 = GroupHom(deg0, T, IntMatrix.from_rows(
        [(rec.matrix @ inc0.matrix).row(i) for i in range(T.ngens)], deg0.ngens))
    details = {"q": q, "sigma": [P.format(F) for P in sigma], "well_defined": True,
               "degree_compatible": degree_ok and _degree_row_matches(rec, pic),
               "degree_zero_h0": deg0.to_json(), "degree_zero_galois": T.to_json(),
               "degree_zero_isomorphism": rec0.is_isomorphism(), "places_used": len(places)}
    # h_0 -> T x Z is onto; inside T x Zhat the cokernel is Zhat/Z
    return ReciprocityReport(rec.is_injective(), rec.is_surjective(), None, ZHAT_MOD_Z, details)


def _degree_row_matches(rec: GroupHom, pic) -> bool:
    return rec.matrix.row(rec.matrix.rows - 1) == pic.degree_hom().matrix.row(0)


def rec_ff(q: int, sigma: Iterable, D: dict) -> tuple[tuple[int, ...], int]:
    return tame_galois_ff(q, sigma).rec(D)
