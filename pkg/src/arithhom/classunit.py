"""Class groups and unit groups of the supported number fields.

Class groups are computed from a Minkowski factor base, with relations read off
from smooth elements and then certified: every nonzero class of the candidate
group is shown to be non-principal by an exact principality test (quadratic
fields and Q).  Unit groups are available for unit rank at most one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .abgrp import FGAbelianGroup, IntMatrix, from_invariants, group_from_relations
from .numfield import (FieldElement, IdealRec, NumberField, PrimeIdealRec,
                       factor_element, factor_ideal, ideal_from_factorization,
                       prime_power, primes_up_to, split_prime)


class ClassGroupError(RuntimeError):
    pass


class BoundExceededError(ClassGroupError):
    """A search bound (Minkowski bound or relation budget) was exceeded."""


class InconclusiveError(ClassGroupError):
    """The bounded search neither found a generator nor proved there is none."""


class UnsupportedRankError(ClassGroupError):
    """Unit groups are only computed for unit rank at most one."""


MINKOWSKI_LIMIT = 10 ** 4


def minkowski_bound(K: NumberField) -> float:
    n = K.degree
    r2 = K.signature[1]
    return math.factorial(n) / n ** n * (4 / math.pi) ** r2 * math.sqrt(abs(K.discriminant))


# ---------------------------------------------------------------------------
# units


@dataclass(frozen=True, eq=False)
class UnitGroup:
    """``E_k = mu_w x <fundamental units>``."""

    field: NumberField
    torsion_order: int
    torsion_gen: FieldElement
    fundamental_units: tuple[FieldElement, ...]

    @property
    def rank(self) -> int:
        return len(self.fundamental_units)

    @property
    def generators(self) -> list[FieldElement]:
        return [self.torsion_gen, *self.fundamental_units]

    def as_group(self) -> FGAbelianGroup:
        """Abstract group on ``generators``: ``Z/w`` then ``Z^rank``."""
        n = 1 + self.rank
        return group_from_relations(n, IntMatrix.from_columns([[self.torsion_order] + [0] * self.rank], n))

    def element(self, coords) -> FieldElement:
        r = self.field.one
        for g, c in zip(self.generators, coords):
            r = r * g ** int(c)
        return r

    def coordinates(self, u: FieldElement) -> list[int]:
        """Exponents of ``u`` on ``generators``; raises if ``u`` is not a unit."""
        if abs(u.norm()) != 1 or not u.is_integral():
            raise ValueError(f"{u} is not a unit")
        exps = []
        rest = u
        if self.rank:
            eps = self.fundamental_units[0]
            s = abs(_real_value(rest))
            k = round(math.log(s) / math.log(_real_value(eps)))
            rest = rest * eps ** (-k)
            exps = [k]
        t = self.field.one
        for j in range(self.torsion_order):
            if t == rest:
                return [j] + exps
            t = t * self.torsion_gen
        raise ValueError(f"{u} is not in the unit group spanned by the generators")


def _real_value(a: FieldElement) -> float:
    """Value under the first real embedding (theta -> larger real root)."""
    K = a.field
    t = max(K.real_embeddings_of_theta())
    return sum(float(c) * t ** i for i, c in enumerate(a.coords))


def _quadratic_conj(a: FieldElement) -> FieldElement:
    K = a.field
    tr = -K.order_poly[1]
    x, y = a.coords
    return K.elt([x + y * tr, -y])


def fundamental_unit(K: NumberField) -> FieldElement:
    """Fundamental unit ``eps > 1`` of a real quadratic field.

    Uses the continued-fraction expansion of the integral generator theta: the
    first convergent p/q with ``N(p - q*theta) = +-1`` gives the fundamental
    unit up to sign and conjugation.
    """
    if K.degree != 2 or K.discriminant < 0:
        raise ValueError("fundamental_unit needs a real quadratic field")
    c, b = K.order_poly[0], K.order_poly[1]
    D = K.discriminant
    # theta = (-b + sqrt(D)) / 2 = (P + sqrt(D)) / Q with P = -b, Q = 2
    P, Q = -b, 2
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    sd = isqrt(D)
    for _ in range(10 ** 6):
        # floor((P + sqrt(D)) / Q) exactly; sqrt(D) is irrational
        a = (P + sd) // Q if Q > 0 else -((P + sd) // -Q) - 1
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        nrm = h * h + b * h * k + c * k * k  # N(h - k*theta)
        if abs(nrm) == 1:
            u = K.elt([h, -k])
            break
        P = a * Q - P
        Q = (D - P * P) // Q
    else:
        raise BoundExceededError("continued fraction did not reach a unit")
    eps = _quadratic_conj(u)
    if _real_value(eps) < 0:
        eps = -eps
    if _real_value(eps) < 1:
        eps = eps.inverse()
    return eps


def unit_group(K: NumberField) -> UnitGroup:
    if K.degree == 1:
        return UnitGroup(K, 2, K.from_int(-1), ())
    if K.degree == 2 and K.discriminant < 0:
        if K.discriminant == -4:
            return UnitGroup(K, 4, K.theta, ())
        if K.discriminant == -3:
            return UnitGroup(K, 6, K.theta, ())
        return UnitGroup(K, 2, K.from_int(-1), ())
    if K.degree == 2:
        return UnitGroup(K, 2, K.from_int(-1), (fundamental_unit(K),))
    raise UnsupportedRankError(
        f"unit group of {K.name} has rank {K.unit_rank}; only rank <= 1 is supported")


# ---------------------------------------------------------------------------
# principality


def _quadratic_norm_elements(K: NumberField, N: int, eps: FieldElement | None):
    """Integral x + y*theta with |norm| = N, up to units in the real case.

    Imaginary fields: all such elements.  Real fields: a set meeting every
    unit orbit, namely the elements with both embeddings at most sqrt(N*eps).
    """
    b = K.order_poly[1]
    D = K.discriminant
    if D < 0:
        ymax = isqrt(4 * N // -D) + 1
        signs = (1,)
    else:
        e = _real_value(eps)
        ymax = int(2 * math.sqrt(N * e / D)) + 2
        signs = (1, -1)
    for ay in range(ymax + 1):
        for y in ((ay,) if ay == 0 else (ay, -ay)):
            for s in signs:
                t = 4 * s * N + D * y * y
                if t < 0:
                    continue
                u = isqrt(t)
                if u * u != t:
                    continue
                for uu in sorted({u, -u}):
                    if (uu + b * y) % 2 == 0:
                        yield K.elt([(uu + b * y) // 2, y])


def _lattice_search(I: IdealRec, N: Fraction, budget: int = 200000):
    n = I.field.degree
    B = 1
    cols = I.basis_elements()
    seen = 0
    while seen < budget:
        for coeffs in itertools.product(range(-B, B + 1), repeat=n):
            if max(abs(c) for c in coeffs) != B:
                continue
            a = sum((col * c for col, c in zip(cols, coeffs)), I.field.from_int(0))
            if not a.is_zero() and abs(a.norm()) == N:
                return a
            seen += 1
        B += 1
    return None


def is_principal(I: IdealRec) -> FieldElement | None:
    """A generator of ``I``, or ``None`` when ``I`` is provably not principal.

    Exact for Q and quadratic fields.  For larger degree a bounded search is
    run and ``InconclusiveError`` is raised when it finds nothing.
    """
    K = I.field
    if K.degree == 1:
        return K.from_int(Fraction(I.num[0, 0], I.den))
    J = IdealRec(K, I.num, 1)
    N = J.norm()
    if K.degree == 2:
        eps = unit_group(K).fundamental_units[0] if K.discriminant > 0 else None
        for a in _quadratic_norm_elements(K, int(N), eps):
            if J.contains(a):
                return a / I.den
        return None
    a = _lattice_search(J, N)
    if a is None:
        raise InconclusiveError(f"no generator found for {I} within the search budget")
    return a / I.den


# ---------------------------------------------------------------------------
# class group


@dataclass(eq=False)
class ClassGroup:
    """``Cl(k)`` in Smith form.

    ``group`` is cyclic-decomposed; ``generators[j]`` is a prime whose class is
    the j-th basis vector and ``witnesses[j]`` generates its ``orders[j]``-th
    power.
    """

    field: NumberField
    group: FGAbelianGroup
    factor_base: tuple[PrimeIdealRec, ...]
    generators: tuple[PrimeIdealRec, ...]
    witnesses: tuple[FieldElement, ...]
    _prime_classes: dict = field(default_factory=dict, repr=False)
    _reps: dict = field(default_factory=dict, repr=False)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(self.group.invariants)

    @property
    def order(self) -> int:
        return self.group.order

    def class_of_prime(self, P: PrimeIdealRec) -> tuple[int, ...]:
        if P not in self._prime_classes:
            self._prime_classes[P] = self._search_prime_class(P)
        return self._prime_classes[P]

    def class_of(self, I: IdealRec) -> tuple[int, ...]:
        vec = [0] * len(self.orders)
        for P, v in factor_ideal(I).items():
            vec = [a + v * b for a, b in zip(vec, self.class_of_prime(P))]
        return self.reduce(vec)

    def class_of_factorization(self, fac: dict) -> tuple[int, ...]:
        vec = [0] * len(self.orders)
        for P, v in fac.items():
            vec = [a + v * b for a, b in zip(vec, self.class_of_prime(P))]
        return self.reduce(vec)

    def reduce(self, vec) -> tuple[int, ...]:
        return tuple(int(a) % h for a, h in zip(vec, self.orders))

    def _search_prime_class(self, P: PrimeIdealRec) -> tuple[int, ...]:
        if not self.orders:
            return ()
        # cheap route: a in P with (a) = P * J, J supported on the factor base
        K = self.field
        fb = set(self.factor_base)
        cols = P.ideal.basis_elements()
        n = K.degree
        for B in range(1, 9 if n == 2 else 4):
            for coeffs in itertools.product(range(-B, B + 1), repeat=n):
                if max(abs(c) for c in coeffs) != B:
                    continue
                a = sum((col * c for col, c in zip(cols, coeffs)), K.from_int(0))
                if a.is_zero():
                    continue
                fac = _smooth_factorization(a, fb | {P})
                if fac is None or fac.get(P, 0) != 1:
                    continue
                vec = [0] * len(self.orders)
                for Q, v in fac.items():
                    if Q != P:
                        vec = [x - v * y for x, y in zip(vec, self._prime_classes[Q])]
                return self.reduce(vec)
        # exact route: the unique class c with P * (representative of -c) principal
        reps = self._class_representatives()
        for c, rep in reps.items():
            neg = self.reduce([-x for x in c])
            fac = dict(reps[neg])
            fac[P] = fac.get(P, 0) + 1
            if is_principal(ideal_from_factorization(K, fac)) is not None:
                return c
        raise BoundExceededError(f"could not determine the class of {P}")

    def _class_representatives(self) -> dict:
        """For every class, a factor-base ideal (as a factorization) in it."""
        if self._reps:
            return self._reps
        zero = self.reduce([0] * len(self.orders))
        reps = {zero: {}}
        frontier = [zero]
        while frontier:
            nxt = []
            for c in frontier:
                for Q in self.factor_base:
                    d = self.reduce([a + b for a, b in zip(c, self._prime_classes[Q])])
                    if d not in reps:
                        fac = dict(reps[c])
                        fac[Q] = fac.get(Q, 0) + 1
                        reps[d] = fac
                        nxt.append(d)
            frontier = nxt
        self._reps.update(reps)
        return reps

    def prime_in_class(self, target, avoid=(), max_norm: int = 10 ** 5) -> PrimeIdealRec:
        """Smallest-norm prime with the given class, outside ``avoid``."""
        target = self.reduce(target)
        avoid = set(avoid)
        bound = 64
        while bound <= max_norm:
            for P in primes_up_to(self.field, bound):
                if P not in avoid and self.class_of_prime(P) == target:
                    return P
            bound *= 2
        raise BoundExceededError(f"no prime of norm <= {max_norm} in class {target}")

    def principal_generator(self, I: IdealRec) -> FieldElement:
        """Generator of an ideal whose class is trivial."""
        g = is_principal(I)
        if g is None:
            raise ValueError(f"{I} is not principal")
        return g

    def to_json(self) -> dict:
        return self.group.to_json()


def _smooth_factorization(a: FieldElement, primes: set) -> dict | None:
    """Factorization of ``a`` if it is supported on ``primes``, else None."""
    nrm = abs(a.norm())
    rest = nrm.numerator * nrm.denominator
    ps = sorted({P.p for P in primes})
    for p in ps:
        while rest % p == 0:
            rest //= p
    if rest != 1:
        return None
    fac = factor_element(a)
    if any(P not in primes for P in fac):
        return None
    return fac


def _element_box(K: NumberField, B: int):
    n = K.degree
    for coeffs in itertools.product(range(-B, B + 1), repeat=n):
        if coeffs[-1] <= 0:
            continue
        if gcd(*coeffs) != 1:
            continue
        yield K.elt(coeffs)


def _relation_group(nfb: int, rels: list[list[int]]) -> FGAbelianGroup:
    if not rels:
        return group_from_relations(nfb)
    return group_from_relations(nfb, IntMatrix.from_columns(rels, nfb))


_CLASS_GROUP_CACHE: dict = {}


def class_group(K: NumberField) -> ClassGroup:
    """Compute and certify ``Cl(k)``."""
    if K.name in _CLASS_GROUP_CACHE:
        return _CLASS_GROUP_CACHE[K.name]
    M = minkowski_bound(K)
    if M > MINKOWSKI_LIMIT:
        raise BoundExceededError(f"Minkowski bound {M:.1f} exceeds {MINKOWSKI_LIMIT}")
    fb = tuple(primes_up_to(K, int(M)))
    index = {P: i for i, P in enumerate(fb)}
    nfb = len(fb)
    rels: list[list[int]] = []

    def add(fac):
        v = [0] * nfb
        for P, e in fac.items():
            v[index[P]] += e
        if any(v):
            rels.append(v)

    for p in sorted({P.p for P in fb}):
        ps = split_prime(K, p)
        if all(P in index for P in ps):
            add({P: P.e for P in ps})

    box_budget = 80 if K.degree == 2 else max(1, int(20000 ** (1 / K.degree)) // 2)
    fbset = set(fb)
    G = _relation_group(nfb, rels)
    B = 0
    while True:
        if G.is_finite or nfb == 0:
            bad = _uncertified_class(K, fb, G) if nfb else None
            if bad is None:
                break
            rels.append(bad)
            G = _relation_group(nfb, rels)
            continue
        B += 1
        if B > box_budget:
            raise BoundExceededError(f"relation search for {K.name} exhausted its budget")
        for a in _element_box(K, B):
            if max(abs(c) for c in a.coords) != B:
                continue
            fac = _smooth_factorization(a, fbset)
            if fac is not None:
                add(fac)
        G = _relation_group(nfb, rels)

    invariants = list(G.invariants)
    snf_group = from_invariants(invariants)
    cg = ClassGroup(K, snf_group, fb, (), ())
    for i, P in enumerate(fb):
        e = [0] * nfb
        e[i] = 1
        cg._prime_classes[P] = cg.reduce(G.coords(e))
    gens, wits = [], []
    for j, h in enumerate(invariants):
        target = [int(i == j) for i in range(len(invariants))]
        P = cg.prime_in_class(target)
        alpha = is_principal(prime_power(P, h))
        if alpha is None:
            raise ClassGroupError(f"{P}^{h} should be principal")
        gens.append(P)
        wits.append(alpha)
    cg.generators = tuple(gens)
    cg.witnesses = tuple(wits)
    _CLASS_GROUP_CACHE[K.name] = cg
    return cg


def _uncertified_class(K: NumberField, fb, G: FGAbelianGroup) -> list[int] | None:
    """A new relation if some nonzero class of ``G`` is principal, else None.

    Raises ``InconclusiveError`` when the field has no exact principality test
    and ``G`` is nontrivial.
    """
    if G.is_trivial:
        return None
    if K.degree > 2:
        raise InconclusiveError(
            f"class group of {K.name} could not be certified (candidate {G.invariants})")
    for elt in G.elements():
        if G.is_zero(elt):
            continue
        fac = {P: int(c) for P, c in zip(fb, elt) if c}
        I = ideal_from_factorization(K, fac)
        if is_principal(I) is not None:
            return [int(c) for c in elt]
    return None
