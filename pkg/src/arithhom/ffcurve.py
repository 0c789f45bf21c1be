"""Open subschemes of the projective line over a finite field.

For ``X = P^1 - Sigma`` over ``F_q`` the relative Picard group ``Pic(P^1, Sigma)``
is presented from the exact sequence

    F_q^x -> prod_{P in Sigma} k(P)^x -> Pic(P^1, Sigma) -> Z -> 0,

the last map being the degree.  Generators: one residue generator per place of
``Sigma`` and a degree generator, the class of a fixed degree-one divisor
``D0`` supported off ``Sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import sympy

from .abgrp import (FGAbelianGroup, GroupHom, IntMatrix, cyclic, free,
                    group_from_relations, hom_kernel)
from .finfield import (ExtensionField, factor_poly, finite_field, is_irreducible,
                       monic_irreducibles, poly_divmod, poly_mul,
                       poly_sub, poly_trim)


class PlaceError(ValueError):
    pass


class NotOneAtPlaceError(ValueError):
    """A function that should be congruent to 1 at a place is not."""

    def __init__(self, place, msg: str = ""):
        self.place = place
        super().__init__(msg or f"function is not congruent to 1 at {place}")


@dataclass(frozen=True)
class Place:
    """A closed point of P^1: a monic irreducible polynomial, or ``None`` for infinity."""

    poly: tuple | None

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else len(self.poly) - 1

    def sort_key(self, F) -> tuple:
        if self.poly is None:
            return (1, 0, ())
        return (0, self.degree, tuple(F.to_int(c) for c in reversed(self.poly)))

    def format(self, F) -> str:
        if self.poly is None:
            return "inf"
        terms = []
        for i in range(len(self.poly) - 1, -1, -1):
            c = F.to_int(self.poly[i])
            if c == 0:
                continue
            mono = "" if i == 0 else "t" if i == 1 else f"t^{i}"
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms)


INF = Place(None)


@lru_cache(maxsize=None)
def base_field(q: int, modulus: tuple | None = None):
    return finite_field(q, list(modulus) if modulus else None)


def parse_place(F, spec: str) -> Place:
    """``"inf"``, a point ``"a"`` of ``F_q`` (the place ``t - a``), or a monic
    irreducible polynomial in ``t`` such as ``"t^2+t+2"``."""
    spec = spec.strip()
    if spec in ("inf", "oo", "infinity"):
        return INF
    if spec.isdigit():
        if int(spec) >= F.q:
            raise PlaceError(f"point {spec!r} is not an element of F_{F.q}")
        return linear_place(F, F.from_int(int(spec)))
    t = sympy.Symbol("t")
    try:
        poly = sympy.Poly(sympy.sympify(spec.replace("^", "**"), locals={"t": t}), t)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError):
        raise PlaceError(f"malformed place {spec!r}") from None
    coeffs = poly.all_coeffs()
    if any(not c.is_integer for c in coeffs):
        raise PlaceError(f"place {spec!r} has non-integer coefficients")
    ints = [int(c) for c in reversed(coeffs)]
    if F.degree == 1:
        vals = [F.from_int(c % F.q) for c in ints]
    else:
        if any(c < 0 or c >= F.q for c in ints):
            raise PlaceError(f"coefficients of {spec!r} must be digit-encoded elements in [0, {F.q})")
        vals = [F.from_int(c) for c in ints]
    vals = poly_trim(F, vals)
    if len(vals) < 2 or vals[-1] != F.one:
        raise PlaceError(f"place {spec!r} must be a monic polynomial of degree >= 1")
    if not is_irreducible(F, vals):
        raise PlaceError(f"place {spec!r} is not irreducible over F_{F.q}")
    return Place(tuple(vals))


def parse_places(F, spec: str | Iterable) -> tuple[Place, ...]:
    if isinstance(spec, str):
        items = [s for s in spec.split(",") if s.strip()]
    else:
        items = list(spec)
    places = [p if isinstance(p, Place) else parse_place(F, p) for p in items]
    if len(set(places)) != len(places):
        raise PlaceError("repeated place in Sigma")
    return tuple(sorted(places, key=lambda P: P.sort_key(F)))


def linear_place(F, a) -> Place:
    """The place ``t - a``."""
    return Place((F.neg(a), F.one))


def places_of_degree(F, d: int) -> list[Place]:
    out = [Place(tuple(f)) for f in monic_irreducibles(F, d)]
    if d == 1:
        out.append(INF)
    return out


# ---------------------------------------------------------------------------
# rational functions and residues


def _poly(F, a) -> list:
    return poly_trim(F, list(a))


@lru_cache(maxsize=None)
def residue_field(F, P: Place) -> ExtensionField:
    if P.is_infinite:
        return ExtensionField(F, (F.zero, F.one))
    return ExtensionField(F, P.poly)


def _poly_residue(F, a, P: Place):
    k = residue_field(F, P)
    return k.reduce(a) if a else k.zero


def value_at(F, num, den, P: Place):
    """Value of ``num/den`` in ``k(P)``, or None if ``num/den`` has a pole there."""
    num, den = _poly(F, num), _poly(F, den)
    k = residue_field(F, P)
    if P.is_infinite:
        dn, dd = len(num) - 1, len(den) - 1
        if dn > dd:
            return None
        if dn < dd:
            return k.zero
        return k.embed(F.mul(num[-1], F.inv(den[-1])))
    vn, vd = order_at(F, num, P), order_at(F, den, P)
    if vn < vd:
        return None
    if vn > vd:
        return k.zero
    for _ in range(vn):
        num = poly_divmod(F, num, list(P.poly))[0]
        den = poly_divmod(F, den, list(P.poly))[0]
    return k.mul(_poly_residue(F, num, P), k.inv(_poly_residue(F, den, P)))


def order_at(F, a, P: Place) -> int:
    """Valuation of a nonzero polynomial at a finite place."""
    a = _poly(F, a)
    v = 0
    while True:
        qt, r = poly_divmod(F, a, list(P.poly))
        if r:
            return v
        a, v = qt, v + 1


def is_one_at(F, num, den, P: Place) -> bool:
    """Is ``num/den`` defined and congruent to 1 at ``P``?"""
    if P.is_infinite:
        num, den = _poly(F, num), _poly(F, den)
        if len(num) != len(den):
            return False
        diff = poly_sub(F, num, den)
        return len(diff) < len(den)
    k = residue_field(F, P)
    return value_at(F, num, den, P) == k.one


# ---------------------------------------------------------------------------
# divisors


def _as_divisor(F, d: dict) -> dict:
    return {P: v for P, v in sorted(d.items(), key=lambda t: t[0].sort_key(F)) if v}


def divisor_degree(D: dict) -> int:
    return sum(P.degree * v for P, v in D.items())


def ff_div(F, num, den, sigma: Iterable[Place] = ()) -> dict:
    """Divisor of ``num/den``, which must be congruent to 1 at every place of ``sigma``."""
    num, den = _poly(F, num), _poly(F, den)
    if not num or not den:
        raise ValueError("zero function")
    for P in sigma:
        if not is_one_at(F, num, den, P):
            raise NotOneAtPlaceError(P.format(F), f"function is not congruent to 1 at {P.format(F)}")
    out: dict = {}
    if len(num) > 1:
        for g, m in factor_poly(F, num):
            out[Place(tuple(g))] = out.get(Place(tuple(g)), 0) + m
    if len(den) > 1:
        for g, m in factor_poly(F, den):
            out[Place(tuple(g))] = out.get(Place(tuple(g)), 0) - m
    out[INF] = (len(den) - 1) - (len(num) - 1)
    return _as_divisor(F, out)


def function_of_degree_zero_divisor(F, D: dict) -> tuple[list, list]:
    """``(num, den)`` of monic polynomials with ``div(num/den) = D`` (degree 0)."""
    if divisor_degree(D) != 0:
        raise ValueError("divisor has nonzero degree")
    num, den = [F.one], [F.one]
    for P, v in D.items():
        if P.is_infinite:
            continue
        for _ in range(abs(v)):
            if v > 0:
                num = poly_mul(F, num, list(P.poly))
            else:
                den = poly_mul(F, den, list(P.poly))
    return num, den


# ---------------------------------------------------------------------------
# Pic(P^1, Sigma)


def _degree_one_divisor(F, sigma: Sequence[Place]) -> dict:
    """A fixed divisor of degree one supported off ``sigma``."""
    if INF not in sigma:
        return {INF: 1}
    for a in (F.from_int(i) for i in range(F.q)):
        P = linear_place(F, a)
        if P not in sigma:
            return {P: 1}
    # all degree-one places lie in sigma; combine degrees 2 and 3
    A = next(P for P in places_of_degree(F, 2) if P not in sigma)
    B = next(P for P in places_of_degree(F, 3) if P not in sigma)
    return {A: -1, B: 1}


@dataclass(eq=False)
class FFPic:
    """``Pic(P^1_{F_q}, Sigma) = h_0(P^1 - Sigma)``."""

    F: object
    sigma: tuple[Place, ...]
    group: FGAbelianGroup
    d0: dict

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def nres(self) -> int:
        return len(self.sigma)

    @property
    def ngens(self) -> int:
        return self.nres + 1

    def residue_orders(self) -> list[int]:
        return [self.q ** P.degree - 1 for P in self.sigma]

    def iota(self, values: Sequence) -> tuple[int, ...]:
        """Class of ``div(f)`` for any ``f`` with the given values at ``sigma``."""
        out = []
        for P, v in zip(self.sigma, values):
            out.append(residue_field(self.F, P).dlog(v))
        return tuple(out) + (0,)

    def iota_function(self, num, den) -> tuple[int, ...]:
        return self.iota([value_at(self.F, num, den, P) for P in self.sigma])

    def class_of(self, D: dict) -> tuple[int, ...]:
        """Class of a divisor supported off ``sigma`` (generator coordinates)."""
        for P in D:
            if P in self.sigma:
                raise ValueError(f"divisor meets Sigma at {P.format(self.F)}")
        d = divisor_degree(D)
        E = dict(D)
        for P, v in self.d0.items():
            E[P] = E.get(P, 0) - d * v
        num, den = function_of_degree_zero_divisor(self.F, _as_divisor(self.F, E))
        # div(num/den) agrees with E away from infinity; both have degree 0
        vec = list(self.iota_function(num, den))
        vec[-1] += d
        return tuple(vec)

    def degree_hom(self) -> GroupHom:
        return GroupHom(self.group, free(1), IntMatrix(1, self.ngens, [[0] * self.nres + [1]]))

    def degree_zero(self) -> tuple[FGAbelianGroup, GroupHom]:
        return hom_kernel(self.degree_hom())

    def constants_hom(self) -> GroupHom:
        """``F_q^x -> prod_{P in Sigma} k(P)^x`` (source cyclic of order q-1)."""
        g = self.F.primitive_element if self.F.degree > 1 else _prime_primitive(self.F)
        cols = [[residue_field(self.F, P).dlog(residue_field(self.F, P).embed(g)) for P in self.sigma]]
        return GroupHom(cyclic(self.q - 1),
                        residue_group(self), IntMatrix.from_columns(cols, self.nres))

    def residue_hom(self) -> GroupHom:
        cols = [tuple(int(i == j) for i in range(self.ngens)) for j in range(self.nres)]
        return GroupHom(residue_group(self), self.group, IntMatrix.from_columns(cols, self.ngens))

    def to_json(self) -> dict:
        return self.group.to_json()


def _prime_primitive(F):
    from .finfield import prime_residue_field
    return prime_residue_field(F.p).primitive_element[0]


def residue_group(pic: FFPic) -> FGAbelianGroup:
    n = pic.nres
    return group_from_relations(n, IntMatrix.diagonal(pic.residue_orders()) if n else None)


def ff_h0(q: int | object, sigma: Iterable[Place | str] = ()) -> FFPic:
    F = base_field(q) if isinstance(q, int) else q
    sigma = parse_places(F, sigma)
    d0 = _degree_one_divisor(F, sigma)
    pic = FFPic(F, sigma, None, d0)
    n = len(sigma)
    rels = [tuple((F.q ** P.degree - 1) * int(i == j) for i in range(n + 1)) for j, P in enumerate(sigma)]
    c = pic.constants_hom() if n else None
    if n:
        rels.append(tuple(c.matrix.col(0)) + (0,))
    pic.group = group_from_relations(n + 1, IntMatrix.from_columns(rels, n + 1) if rels else None)
    return pic


def ff_h1(q: int | object, sigma: Iterable[Place | str] = ()) -> tuple[FGAbelianGroup, GroupHom]:
    """Constants congruent to 1 at every place of ``sigma``, inside ``F_q^x``."""
    F = base_field(q) if isinstance(q, int) else q
    sigma = parse_places(F, sigma)
    pic = FFPic(F, sigma, None, {})
    if not sigma:
        src = cyclic(F.q - 1)
        return src, GroupHom(src, src, IntMatrix.identity(1))
    return hom_kernel(pic.constants_hom())
