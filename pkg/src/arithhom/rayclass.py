"""Ray class groups for squarefree moduli, relative unit groups and S-units.

For a finite set ``Sigma`` of primes of ``k`` with ``m = prod_{P in Sigma} P``
the ray class group ``C_m(k)`` is presented from the exact sequence

    E_k -> (O/m)^x -> C_m(k) -> Cl(k) -> 0.

Elements are vectors on the generators: one residue generator per prime of
``Sigma`` followed by one ideal-class generator per cyclic factor of ``Cl(k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .abgrp import (FGAbelianGroup, GroupHom, IntMatrix, group_from_relations,
                    hom_kernel, lattice_basis, nullspace)
from .classunit import ClassGroup, UnitGroup, class_group, is_principal, unit_group
from .numfield import (FieldElement, IdealRec, NumberField, PrimeIdealRec,
                       factor_element, factor_ideal, ideal_from_factorization,
                       parse_prime, prime_power, residue_unit_dlog)


class ModulusError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Modulus:
    """A squarefree modulus ``m = prod_{P in Sigma} P``."""

    field: NumberField
    primes: tuple[PrimeIdealRec, ...]

    def __post_init__(self):
        if len(set(self.primes)) != len(self.primes):
            dup = next(P for P in self.primes if self.primes.count(P) > 1)
            raise ModulusError(
                f"prime {dup.selector} repeated: only squarefree moduli "
                "m = prod_{p in Sigma} p of distinct primes are supported")
        for P in self.primes:
            if P.field is not self.field:
                raise ModulusError("modulus primes belong to a different field")
        object.__setattr__(self, "primes", tuple(sorted(self.primes)))

    def __contains__(self, P) -> bool:
        return P in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __eq__(self, other):
        return isinstance(other, Modulus) and self.field is other.field and self.primes == other.primes

    def __hash__(self):
        return hash((self.field.name, self.primes))

    @property
    def ideal(self) -> IdealRec:
        return ideal_from_factorization(self.field, {P: 1 for P in self.primes})

    def union(self, other: Iterable[PrimeIdealRec]) -> Modulus:
        return Modulus(self.field, tuple(set(self.primes) | set(other)))

    def minus(self, other: Iterable[PrimeIdealRec]) -> Modulus:
        other = set(other)
        return Modulus(self.field, tuple(P for P in self.primes if P not in other))

    def to_json(self) -> list[str]:
        return [P.selector for P in self.primes]

    def __repr__(self):
        return f"Modulus({self.field.name}; {','.join(self.to_json())})"


def modulus(K: NumberField, primes: Iterable[PrimeIdealRec | str | int] = ()) -> Modulus:
    out = []
    for P in primes:
        if isinstance(P, PrimeIdealRec):
            out.append(P)
        else:
            out.append(parse_prime(K, str(P)))
    return Modulus(K, tuple(out))


def parse_sigma(K: NumberField, spec: str) -> Modulus:
    """Comma-separated prime selectors; the empty string is the empty set."""
    spec = spec.strip()
    if not spec:
        return Modulus(K, ())
    return modulus(K, [s for s in spec.split(",") if s.strip()])


# ---------------------------------------------------------------------------
# (O/m)^x


@dataclass(frozen=True, eq=False)
class ResidueUnitGroup:
    """``(O/m)^x = prod_{P in Sigma} k(P)^x``, one cyclic factor per prime."""

    field: NumberField
    modulus: Modulus
    group: FGAbelianGroup

    @property
    def factors(self) -> list[tuple[PrimeIdealRec, int, tuple]]:
        return [(P, P.norm - 1, P.residue_field.primitive_element) for P in self.modulus]

    @property
    def orders(self) -> list[int]:
        return [P.norm - 1 for P in self.modulus]

    def dlog(self, a: FieldElement) -> tuple[int, ...]:
        """Coordinates of ``a mod m``; ``a`` must be a unit at every prime of m."""
        return tuple(residue_unit_dlog(a, P) for P in self.modulus)

    def generator_residues(self) -> list[tuple]:
        return [P.residue_field.primitive_element for P in self.modulus]


def residue_units(K: NumberField, m: Modulus) -> ResidueUnitGroup:
    n = len(m)
    rel = IntMatrix.diagonal([P.norm - 1 for P in m]) if n else None
    return ResidueUnitGroup(K, m, group_from_relations(n, rel))


# ---------------------------------------------------------------------------
# C_m(k)


@dataclass(eq=False)
class RayClassGroup:
    """``C_m(k)`` with an evaluation map from ideals coprime to ``m``."""

    field: NumberField
    modulus: Modulus
    residue: ResidueUnitGroup
    classgroup: ClassGroup
    units: UnitGroup
    class_gens: tuple[PrimeIdealRec, ...]
    class_orders: tuple[int, ...]
    witnesses: tuple[FieldElement, ...]
    group: FGAbelianGroup = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def nres(self) -> int:
        return len(self.modulus)

    @property
    def ngens(self) -> int:
        return self.nres + len(self.class_gens)

    def iota(self, b: FieldElement) -> tuple[int, ...]:
        """Class of ``(b')`` for any ``b'`` congruent to ``b`` mod m."""
        return self.residue.dlog(b) + (0,) * len(self.class_gens)

    def class_of_prime(self, P: PrimeIdealRec) -> tuple[int, ...]:
        if P in self.modulus:
            raise ValueError(f"{P} divides the modulus")
        if P not in self._cache:
            self._cache[P] = self._compute_prime_class(P)
        return self._cache[P]

    def _compute_prime_class(self, P: PrimeIdealRec) -> tuple[int, ...]:
        c = self.classgroup.class_of_prime(P)
        # P * prod I_j^(h_j - c_j) is principal, generated by gamma
        comp = {P: 1}
        for Ij, cj, hj in zip(self.class_gens, c, self.class_orders):
            e = (-cj) % hj
            if e:
                comp[Ij] = comp.get(Ij, 0) + e
        gamma = is_principal(ideal_from_factorization(self.field, comp))
        if gamma is None:
            raise AssertionError(f"cofactor ideal of {P} should be principal")
        vec = list(self.iota(gamma))
        for j, (cj, hj) in enumerate(zip(c, self.class_orders)):
            vec[self.nres + j] -= (-cj) % hj
        return tuple(vec)

    def class_of_factorization(self, fac: dict) -> tuple[int, ...]:
        vec = [0] * self.ngens
        for P, v in fac.items():
            if v:
                vec = [a + v * b for a, b in zip(vec, self.class_of_prime(P))]
        return tuple(vec)

    def class_of(self, I: IdealRec) -> tuple[int, ...]:
        """Class of a fractional ideal coprime to m (generator coordinates)."""
        return self.class_of_factorization(factor_ideal(I))

    def class_of_element(self, a: FieldElement) -> tuple[int, ...]:
        return self.class_of_factorization(factor_element(a))

    def canonical(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.group.coords(x)

    def is_identity(self, x: Sequence[int]) -> bool:
        return self.group.is_zero(x)

    # -- maps of the defining exact sequence ----------------------------------

    def unit_hom(self) -> GroupHom:
        """``E_k -> (O/m)^x``."""
        E = self.units.as_group()
        cols = [self.residue.dlog(u) for u in self.units.generators]
        return GroupHom(E, self.residue.group, IntMatrix.from_columns(cols, self.nres))

    def residue_hom(self) -> GroupHom:
        """``(O/m)^x -> C_m(k)``."""
        cols = [tuple(int(i == j) for i in range(self.ngens)) for j in range(self.nres)]
        return GroupHom(self.residue.group, self.group, IntMatrix.from_columns(cols, self.ngens))

    def class_projection(self) -> GroupHom:
        """``C_m(k) -> Cl(k)``, forgetting the trivialization along m."""
        cl = self.classgroup.group
        r = len(self.class_gens)
        cols = [(0,) * r] * self.nres
        cols += [tuple(int(i == j) for i in range(r)) for j in range(r)]
        return GroupHom(self.group, cl, IntMatrix.from_columns(cols, r))

    def to_json(self) -> dict:
        return self.group.to_json()


_RAY_CACHE: dict = {}


def ray_class_group(K: NumberField, m: Modulus | Iterable = ()) -> RayClassGroup:
    if not isinstance(m, Modulus):
        m = modulus(K, m)
    key = (K.name, m.primes)
    if key in _RAY_CACHE:
        return _RAY_CACHE[key]
    cg = class_group(K)
    ug = unit_group(K)
    res = residue_units(K, m)
    gens, orders, wits = [], [], []
    for j, h in enumerate(cg.orders):
        target = [int(i == j) for i in range(len(cg.orders))]
        Ij = cg.prime_in_class(target, avoid=m.primes)
        alpha = is_principal(prime_power(Ij, h))
        if alpha is None:
            raise AssertionError(f"{Ij}^{h} should be principal")
        gens.append(Ij)
        orders.append(h)
        wits.append(alpha)
    rc = RayClassGroup(K, m, res, cg, ug, tuple(gens), tuple(orders), tuple(wits))
    n, r = len(m), len(gens)
    ngens = n + r
    rels = []
    for i, P in enumerate(m):
        rels.append(tuple((P.norm - 1) * int(k == i) for k in range(ngens)))
    for u in ug.generators:
        rels.append(rc.iota(u))
    for j, (h, alpha) in enumerate(zip(orders, wits)):
        v = [-x for x in rc.iota(alpha)]
        v[n + j] += h
        rels.append(tuple(v))
    rc.group = group_from_relations(ngens, IntMatrix.from_columns(rels, ngens) if ngens else None)
    _RAY_CACHE[key] = rc
    return rc


# ---------------------------------------------------------------------------
# E_k^{1,Sigma}


@dataclass(frozen=True, eq=False)
class RelativeUnitGroup:
    """Units congruent to 1 modulo every prime of ``Sigma``."""

    field: NumberField
    modulus: Modulus
    group: FGAbelianGroup
    generators: tuple[FieldElement, ...]
    inclusion: GroupHom  # into units.as_group()
    units: UnitGroup

    def to_json(self) -> dict:
        return self.group.to_json()


def relative_units(K: NumberField, m: Modulus | Iterable = ()) -> RelativeUnitGroup:
    if not isinstance(m, Modulus):
        m = modulus(K, m)
    ug = unit_group(K)
    res = residue_units(K, m)
    E = ug.as_group()
    cols = [res.dlog(u) for u in ug.generators]
    h = GroupHom(E, res.group, IntMatrix.from_columns(cols, len(m)))
    sub, inc = hom_kernel(h)
    gens = tuple(ug.element(inc.matrix.col(j)) for j in range(sub.ngens))
    assert sub.free_rank == K.unit_rank
    return RelativeUnitGroup(K, m, sub, gens, inc, ug)


# ---------------------------------------------------------------------------
# S-units and the bivariant groups h_i(X, U)


@dataclass(frozen=True, eq=False)
class SUnitGroup:
    """``O_{k,A}^x`` on generators: torsion, fundamental units, then
    generators of the principal ideals supported on ``A``."""

    field: NumberField
    primes: tuple[PrimeIdealRec, ...]
    units: UnitGroup
    lattice: IntMatrix  # columns: exponent vectors on ``primes`` of principal ideals
    sgens: tuple[FieldElement, ...]
    group: FGAbelianGroup

    @property
    def generators(self) -> list[FieldElement]:
        return [*self.units.generators, *self.sgens]

    def element(self, coords) -> FieldElement:
        r = self.field.one
        for g, c in zip(self.generators, coords):
            r = r * g ** int(c)
        return r

    def coordinates(self, x: FieldElement) -> list[int]:
        from .numfield import valuation
        from .abgrp import Lattice
        v = [valuation(x, P) for P in self.primes]
        c = Lattice(self.lattice).solve_basis(v) if self.primes else []
        if c is None:
            raise ValueError(f"{x} is not an S-unit")
        rest = x
        for g, ci in zip(self.sgens, c):
            rest = rest * g ** (-ci)
        return list(self.units.coordinates(rest)) + list(c)


def s_unit_group(K: NumberField, primes: Iterable[PrimeIdealRec]) -> SUnitGroup:
    primes = tuple(sorted(set(primes)))
    ug = unit_group(K)
    cg = class_group(K)
    a = len(primes)
    hs = list(cg.orders)
    if a:
        M = [list(cg.class_of_prime(P)) for P in primes]  # a x r
        r = len(hs)
        big = IntMatrix.from_columns([tuple(M[i]) for i in range(a)] +
                                     [tuple(hs[j] * int(i == j) for i in range(r)) for j in range(r)], r) \
            if r else IntMatrix.zero(0, a)
        ker = nullspace(big) if r else IntMatrix.identity(a)
        top = IntMatrix.from_columns([ker.col(j)[:a] for j in range(ker.cols)], a)
        lat = lattice_basis(top)
    else:
        lat = IntMatrix.zero(0, 0)
    sg = []
    for j in range(lat.cols):
        I = ideal_from_factorization(K, {P: e for P, e in zip(primes, lat.col(j)) if e})
        g = is_principal(I)
        if g is None:
            raise AssertionError("kernel vector should give a principal ideal")
        sg.append(g)
    n = 1 + ug.rank + len(sg)
    rel = IntMatrix.from_columns([[ug.torsion_order] + [0] * (n - 1)], n)
    return SUnitGroup(K, primes, ug, lat, tuple(sg), group_from_relations(n, rel))


@dataclass(frozen=True, eq=False)
class BivariantH1:
    """``A``-units congruent to 1 at the primes of ``Sigma`` outside ``A``."""

    field: NumberField
    removed: tuple[PrimeIdealRec, ...]
    modulus: Modulus
    sunits: SUnitGroup
    group: FGAbelianGroup
    inclusion: GroupHom  # into sunits.group

    def generators(self) -> list[FieldElement]:
        return [self.sunits.element(self.inclusion.matrix.col(j)) for j in range(self.group.ngens)]

    def coordinates_in_sunits(self, x: FieldElement) -> list[int]:
        return self.sunits.coordinates(x)


def bivariant_h1(K: NumberField, sigma: Modulus, removed: Iterable[PrimeIdealRec]) -> BivariantH1:
    removed = tuple(sorted(set(removed)))
    m = sigma.minus(removed)
    su = s_unit_group(K, removed)
    res = residue_units(K, m)
    cols = [res.dlog(g) for g in su.generators]
    h = GroupHom(su.group, res.group, IntMatrix.from_columns(cols, len(m)))
    sub, inc = hom_kernel(h)
    return BivariantH1(K, removed, m, su, sub, inc)


@dataclass(frozen=True, eq=False)
class BivariantH0:
    """``Pic(Spec O_{k,A}, Sigma - A)``: ``C_{Sigma - A}(k)`` modulo the classes of ``A``."""

    field: NumberField
    removed: tuple[PrimeIdealRec, ...]
    ray: RayClassGroup
    group: FGAbelianGroup

    def class_of_factorization(self, fac: dict) -> tuple[int, ...]:
        return self.ray.class_of_factorization({P: v for P, v in fac.items() if P not in self.removed})

    def class_of_prime(self, P: PrimeIdealRec) -> tuple[int, ...]:
        if P in self.removed:
            return (0,) * self.group.ngens
        return self.ray.class_of_prime(P)


def bivariant_h0(K: NumberField, sigma: Modulus, removed: Iterable[PrimeIdealRec]) -> BivariantH0:
    removed = tuple(sorted(set(removed)))
    m = sigma.minus(removed)
    rc = ray_class_group(K, m)
    rels = [rc.group.relations.col(j) for j in range(rc.group.relations.cols)]
    rels += [rc.class_of_prime(P) for P in removed]
    n = rc.ngens
    g = group_from_relations(n, IntMatrix.from_columns(rels, n) if rels and n else None)
    return BivariantH0(K, removed, rc, g)
