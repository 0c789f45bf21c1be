"""Number fields with monogenic maximal order, prime splitting and ideal arithmetic.

Every supported field is stored through a generator ``theta`` with
``O_k = Z[theta]``; elements carry rational coordinates on ``1, theta, ...``.
Ideals are Z-lattices in those coordinates, kept in column HNF.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

import sympy
from sympy import factorint, isprime

from .abgrp import IntMatrix, Lattice, det, hnf, lattice_basis
from .finfield import (ExtensionField, PrimeField, factor_poly_mod_p, poly_gcd,
                       poly_trim)


class UnsupportedFieldError(ValueError):
    """The requested field or order is outside the supported class."""


class UnsupportedOrderError(UnsupportedFieldError):
    pass


# ---------------------------------------------------------------------------
# integer polynomials (low degree first)


def _ipoly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _ipoly_eval(a, x):
    r = 0
    for c in reversed(a):
        r = r * x + c
    return r


def dedekind_is_maximal(f: Sequence[int], p: int) -> bool:
    """Dedekind criterion: is ``Z[x]/(f)`` maximal at the prime ``p``?"""
    f = list(f)
    fac = factor_poly_mod_p(f, p)
    g, h = [1], [1]
    for gi, e in fac:
        g = _ipoly_mul(g, gi)
        for _ in range(e - 1):
            h = _ipoly_mul(h, gi)
    gh = _ipoly_mul(g, h)
    diff = [(f[i] if i < len(f) else 0) - (gh[i] if i < len(gh) else 0)
            for i in range(max(len(f), len(gh)))]
    assert all(c % p == 0 for c in diff)
    F = PrimeField(p)
    big_f = poly_trim(F, [(c // p) % p for c in diff])
    gb = poly_trim(F, [c % p for c in g])
    hb = poly_trim(F, [c % p for c in h])
    d = poly_gcd(F, poly_gcd(F, big_f, gb), hb) if big_f else poly_gcd(F, gb, hb)
    return len(d) == 1


def _squarefree_decomp(n: int) -> tuple[int, int]:
    """n = s^2 * d with d squarefree (sign kept on d)."""
    sign = -1 if n < 0 else 1
    s, d = 1, sign
    for q, e in factorint(abs(n)).items():
        s *= q ** (e // 2)
        if e % 2:
            d *= q
    return s, d


# ---------------------------------------------------------------------------
# fields and elements


@dataclass(frozen=True, eq=False)
class NumberField:
    """A number field together with a generator of its maximal order.

    ``defining_poly`` is the polynomial the user supplied; ``order_poly`` is
    the minimal polynomial of ``theta`` with ``O_k = Z[theta]``.  The rows of
    ``integral_basis`` express ``theta^j`` in powers of a root of
    ``defining_poly``.
    """

    defining_poly: tuple[int, ...]
    order_poly: tuple[int, ...]
    integral_basis: tuple[tuple[Fraction, ...], ...]
    discriminant: int
    signature: tuple[int, int]
    name: str

    @property
    def degree(self) -> int:
        return len(self.order_poly) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def unit_rank(self) -> int:
        r1, r2 = self.signature
        return r1 + r2 - 1

    def __repr__(self):
        return f"NumberField({self.name})"

    def elt(self, coords: Iterable) -> FieldElement:
        return FieldElement(self, tuple(Fraction(c) for c in coords))

    def from_int(self, n) -> FieldElement:
        return self.elt([n] + [0] * (self.degree - 1))

    @property
    def one(self) -> FieldElement:
        return self.from_int(1)

    @property
    def theta(self) -> FieldElement:
        if self.degree == 1:
            return self.from_int(-self.order_poly[0])
        return self.elt([0, 1] + [0] * (self.degree - 2))

    def _mulmod(self, a: Sequence, b: Sequence) -> tuple:
        n = self.degree
        prod_ = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod_[i + j] += x * y
        f = self.order_poly
        for k in range(2 * n - 2, n - 1, -1):
            c = prod_[k]
            if c:
                for i in range(n + 1):
                    prod_[k - n + i] -= c * f[i]
        return tuple(prod_[:n])

    @property
    def quadratic_d(self) -> int | None:
        """Squarefree d with k = Q(sqrt d), for quadratic fields."""
        if self.degree != 2:
            return None
        return self.discriminant // 4 if self.discriminant % 4 == 0 else self.discriminant

    def real_embeddings_of_theta(self) -> list[float]:
        import numpy as np
        roots = np.roots(list(reversed([float(c) for c in self.order_poly])))
        return sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9)

    def complex_embeddings_of_theta(self) -> list[complex]:
        import numpy as np
        roots = np.roots(list(reversed([float(c) for c in self.order_poly])))
        real = sorted((r for r in roots if abs(r.imag) < 1e-9), key=lambda r: r.real)
        cplx = sorted((r for r in roots if r.imag > 1e-9), key=lambda r: (r.real, r.imag))
        return [complex(r) for r in real] + [complex(r) for r in cplx]


@dataclass(frozen=True)
class FieldElement:
    """Element of a number field in coordinates on the integral basis."""

    field: NumberField = field(compare=False, hash=False, repr=False)
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.degree:
            raise ValueError("coordinate vector has the wrong length")

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.from_int(other)

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field._mulmod(self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        r, a = self.field.one, self
        while n:
            if n & 1:
                r = r * a
            a = a * a
            n >>= 1
        return r

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def mult_matrix(self) -> list[list[Fraction]]:
        """Columns: self * theta^j."""
        n = self.field.degree
        cols = []
        for j in range(n):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            cols.append(self.field._mulmod(self.coords, e))
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self) -> Fraction:
        return _frac_det(self.mult_matrix())

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return sum(m[i][i] for i in range(len(m)))

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self.mult_matrix()
        e0 = [Fraction(int(i == 0)) for i in range(len(m))]
        return FieldElement(self.field, tuple(_frac_solve(m, e0)))

    @property
    def denominator(self) -> int:
        return lcm(*[c.denominator for c in self.coords]) if self.coords else 1

    def is_integral(self) -> bool:
        return self.denominator == 1

    def int_coords(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError("element is not integral")
        return tuple(int(c) for c in self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def embeddings(self) -> list[complex]:
        """Values at the real embeddings, then one per complex pair."""
        out = []
        for t in self.field.complex_embeddings_of_theta():
            out.append(sum(float(c) * t ** i for i, c in enumerate(self.coords)))
        return out

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}" if i > 1 else f"{c}*t")
        return "(" + (" + ".join(terms) or "0") + ")"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def _frac_det(m: list[list[Fraction]]) -> Fraction:
    a = [list(r) for r in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def _frac_solve(m: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(m)
    a = [list(r) + [b[i]] for i, r in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def _poly_to_str(coeffs: Sequence[int], var: str = "x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if mono and abs(c) == 1:
            s = mono
        elif mono:
            s = f"{abs(c)}*{mono}"
        else:
            s = str(abs(c))
        terms.append(("-" if c < 0 else "+") + s)
    out = "".join(terms) or "0"
    return out[1:] if out.startswith("+") else out


def parse_poly(spec: str) -> tuple[int, ...]:
    """Parse ``"x^2+5"`` (or ``"Q"``) into integer coefficients, low degree first."""
    spec = spec.strip()
    if spec in ("Q", "QQ"):
        return (0, 1)
    x = sympy.Symbol("x")
    try:
        expr = sympy.sympify(spec.replace("^", "**"), locals={"x": x})
        poly = sympy.Poly(expr, x)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError):
        raise UnsupportedFieldError(
            f"malformed field spec {spec!r}: expected 'Q' or a monic polynomial in x") from None
    coeffs = poly.all_coeffs()
    if any(not c.is_integer for c in coeffs):
        raise UnsupportedFieldError(f"field spec {spec!r} has non-integer coefficients")
    coeffs = [int(c) for c in reversed(coeffs)]
    if coeffs[-1] != 1:
        raise UnsupportedFieldError(f"field spec {spec!r} is not monic")
    return tuple(coeffs)


def number_field(spec: str | Sequence[int]) -> NumberField:
    """Build (and cache) the field defined by a monic polynomial or ``"Q"``."""
    poly = parse_poly(spec) if isinstance(spec, str) else tuple(int(c) for c in spec)
    return _number_field(poly)


@lru_cache(maxsize=None)
def _number_field(poly: tuple[int, ...]) -> NumberField:
    n = len(poly) - 1
    if n < 1:
        raise UnsupportedFieldError("defining polynomial must have degree >= 1")
    if poly[-1] != 1:
        raise UnsupportedFieldError("defining polynomial must be monic")
    if n > 8:
        raise UnsupportedFieldError(f"degree {n} exceeds the supported maximum of 8")
    if n == 1:
        return NumberField(poly, (0, 1), ((Fraction(-poly[0]),),), 1, (1, 0), "Q")
    x = sympy.Symbol("x")
    sp = sympy.Poly(list(reversed(poly)), x)
    if not sp.is_irreducible:
        raise UnsupportedFieldError(f"{_poly_to_str(poly)} is reducible over Q")
    r1 = sp.count_roots()
    sig = (r1, (n - r1) // 2)
    name = _poly_to_str(poly)
    if n == 2:
        c, b = poly[0], poly[1]
        s, d = _squarefree_decomp(b * b - 4 * c)
        # sqrt(d) = (2 alpha + b) / s
        sqrt_d = (Fraction(b, s), Fraction(2, s))
        if d % 4 == 1:
            order_poly = ((1 - d) // 4, -1, 1)
            theta = (Fraction(1, 2) + sqrt_d[0] / 2, sqrt_d[1] / 2)
            disc = d
        else:
            order_poly = (-d, 0, 1)
            theta = sqrt_d
            disc = 4 * d
        basis = ((Fraction(1), Fraction(0)), theta)
        return NumberField(poly, order_poly, basis, disc, sig, name)
    disc = int(sympy.discriminant(sp, x))
    for p, e in factorint(abs(disc)).items():
        if e >= 2 and not dedekind_is_maximal(poly, p):
            raise UnsupportedOrderError(
                f"Z[x]/({name}) is not maximal at {p}; only monogenic orders are supported")
    basis = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    return NumberField(poly, poly, basis, disc, sig, name)


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True, eq=False)
class IdealRec:
    """Fractional ideal ``num / den`` with ``num`` an integral ideal in column HNF."""

    field: NumberField
    num: IntMatrix
    den: int = 1

    def __post_init__(self):
        n = self.field.degree
        if self.num.shape != (n, n) or det(self.num) == 0:
            raise ValueError("ideal basis must be a full-rank n x n matrix")
        lat = Lattice(self.num)
        theta = self.field.theta
        for col in self.num.columns():
            prod_ = (self.field.elt(col) * theta)
            if prod_.int_coords() not in lat:
                raise ValueError("lattice is not closed under multiplication by theta")

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.num)

    def norm(self) -> Fraction:
        return Fraction(abs(det(self.num)), self.den ** self.field.degree)

    def is_integral(self) -> bool:
        return self.den == 1

    def basis_elements(self) -> list[FieldElement]:
        return [self.field.elt([Fraction(c, self.den) for c in col]) for col in self.num.columns()]

    def contains(self, a: FieldElement) -> bool:
        b = a * self.den
        if not b.is_integral():
            return False
        return b.int_coords() in self.lattice

    def contains_ideal(self, other: IdealRec) -> bool:
        return all(self.contains(b) for b in other.basis_elements())

    def __mul__(self, other: IdealRec) -> IdealRec:
        return ideal_mul(self, other)

    def __eq__(self, other):
        return ideal_eq(self, other)

    def __hash__(self):
        return hash((self.field.name, self.num, self.den))

    def __pow__(self, k: int) -> IdealRec:
        if k < 0:
            return ideal_inverse(self) ** (-k)
        r = unit_ideal(self.field)
        for _ in range(k):
            r = r * self
        return r

    def __repr__(self):
        return f"IdealRec({self.num.tolist()}/{self.den})"


def _make_ideal(K: NumberField, cols: Iterable[Sequence[int]], den: int) -> IdealRec:
    n = K.degree
    basis = lattice_basis(IntMatrix.from_columns(list(cols), n))
    g = den
    for r in basis.tolist():
        for x in r:
            g = gcd(g, x)
    if g > 1:
        basis = IntMatrix(n, n, [[x // g for x in r] for r in basis.tolist()])
        den //= g
    return IdealRec(K, hnf(basis), den)


def ideal_from_gens(K: NumberField, gens: Sequence[FieldElement]) -> IdealRec:
    """The O_k-module generated by the given elements."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("the zero ideal is not supported")
    d = lcm(*[g.denominator for g in gens])
    cols = []
    powers = [K.theta ** j if K.degree > 1 else K.one for j in range(K.degree)]
    for g in gens:
        gi = g * d
        for t in powers:
            cols.append((gi * t).int_coords())
    return _make_ideal(K, cols, d)


def unit_ideal(K: NumberField) -> IdealRec:
    return IdealRec(K, IntMatrix.identity(K.degree), 1)


def principal_ideal(a: FieldElement) -> IdealRec:
    if a.is_zero():
        raise ValueError("principal ideal of zero")
    return ideal_from_gens(a.field, [a])


def ideal_mul(a: IdealRec, b: IdealRec) -> IdealRec:
    if a.field is not b.field:
        raise ValueError("ideals of different fields")
    K = a.field
    cols = []
    for x in a.num.columns():
        ex = K.elt(x)
        for y in b.num.columns():
            cols.append((ex * K.elt(y)).int_coords())
    return _make_ideal(K, cols, a.den * b.den)


def ideal_norm(a: IdealRec) -> Fraction:
    return a.norm()


def ideal_eq(a: IdealRec, b: IdealRec) -> bool:
    if not isinstance(b, IdealRec):
        return NotImplemented
    if a.field is not b.field:
        raise ValueError("ideals of different fields")
    return a.den == b.den and a.num == b.num


def ideal_add(a: IdealRec, b: IdealRec) -> IdealRec:
    d = lcm(a.den, b.den)
    cols = [tuple(x * (d // a.den) for x in c) for c in a.num.columns()]
    cols += [tuple(x * (d // b.den) for x in c) for c in b.num.columns()]
    return _make_ideal(a.field, cols, d)


def reduce_mod_ideal(x: Sequence[int], ideal: IdealRec) -> tuple[int, ...]:
    """Canonical representative of an integral vector modulo an integral ideal."""
    h = ideal.num
    r = list(x)
    for j in range(h.cols):
        piv = h[j, j]
        q = r[j] // piv
        if q:
            col = h.col(j)
            r = [a - q * b for a, b in zip(r, col)]
    return tuple(r)


def crt_idempotent(a: IdealRec, b: IdealRec) -> FieldElement:
    """Element of ``b`` congruent to 1 modulo ``a`` (integral, coprime ideals)."""
    K = a.field
    n = K.degree
    lat = Lattice(a.num.hstack(b.num))
    e0 = [int(i == 0) for i in range(n)]
    c = lat.solve(e0)
    if c is None:
        raise ValueError("ideals are not coprime")
    y = b.num.apply(c[n:])
    return K.elt(y)


def crt(targets: Sequence[tuple[IdealRec, FieldElement]]) -> FieldElement:
    """Integral x with x = t_i mod M_i for pairwise coprime integral moduli M_i."""
    K = targets[0][0].field
    total = unit_ideal(K)
    for m, _ in targets:
        total = total * m
    x = K.from_int(0)
    for i, (m, t) in enumerate(targets):
        rest = unit_ideal(K)
        for j, (mj, _) in enumerate(targets):
            if j != i:
                rest = rest * mj
        x = x + t * crt_idempotent(m, rest)
    return K.elt(reduce_mod_ideal(x.int_coords(), total))


# ---------------------------------------------------------------------------
# primes


@dataclass(frozen=True, eq=False)
class PrimeIdealRec:
    """Prime ideal ``(p, gen)`` with residue degree ``f`` and ramification ``e``."""

    field: NumberField
    residue_char: int
    gen: tuple[int, ...]
    residue_degree: int
    ramification_index: int
    hnf_basis: IntMatrix
    index: int = 0
    count: int = 1
    residue_poly: tuple[int, ...] = ()

    @property
    def p(self) -> int:
        return self.residue_char

    @property
    def f(self) -> int:
        return self.residue_degree

    @property
    def e(self) -> int:
        return self.ramification_index

    @property
    def norm(self) -> int:
        return self.residue_char ** self.residue_degree

    @property
    def two_elt(self) -> tuple[int, FieldElement]:
        return self.residue_char, self.field.elt(self.gen)

    @property
    def ideal(self) -> IdealRec:
        return IdealRec(self.field, self.hnf_basis, 1)

    @property
    def selector(self) -> str:
        return str(self.p) if self.count == 1 else f"{self.p}:{self.index}"

    def _key(self):
        return (self.field.name, self.residue_char, self.gen)

    def __eq__(self, other):
        return isinstance(other, PrimeIdealRec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return (self.residue_char, self.index) < (other.residue_char, other.index)

    def __repr__(self):
        return f"P({self.field.name}; {self.selector})"

    @property
    def residue_field(self) -> ExtensionField:
        return _residue_field(self.p, self.residue_poly)


@lru_cache(maxsize=None)
def _residue_field(p: int, poly: tuple[int, ...]) -> ExtensionField:
    return ExtensionField(PrimeField(p), poly)


@lru_cache(maxsize=None)
def _split_prime(K: NumberField, p: int) -> tuple[PrimeIdealRec, ...]:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    fac = factor_poly_mod_p(list(K.order_poly), p)
    out = []
    for g, e in fac:
        gen_elt = sum((K.theta ** i * c for i, c in enumerate(g)), K.from_int(0))
        gen = tuple(c % p for c in gen_elt.int_coords())
        ideal = ideal_from_gens(K, [K.from_int(p), K.elt(gen)])
        f = len(g) - 1
        if ideal.norm() != p ** f:
            raise UnsupportedOrderError(f"Kummer ideal above {p} has the wrong norm")
        out.append((gen, f, e, ideal.num, tuple(g)))
    out.sort(key=lambda t: t[0])
    primes = tuple(
        PrimeIdealRec(K, p, gen, f, e, h, i, len(out), g)
        for i, (gen, f, e, h, g) in enumerate(out)
    )
    if sum(P.e * P.f for P in primes) != K.degree:
        raise UnsupportedOrderError(f"splitting of {p} is inconsistent")
    return primes


def split_prime(K: NumberField, p: int) -> list[PrimeIdealRec]:
    """Primes above ``p`` (Dedekind-Kummer on the monogenic maximal order)."""
    return list(_split_prime(K, p))


def primes_up_to(K: NumberField, bound: int, norm_bound: bool = True) -> list[PrimeIdealRec]:
    """All primes of norm (or residue characteristic) at most ``bound``."""
    out = []
    for p in sympy.primerange(2, bound + 1):
        for P in split_prime(K, p):
            if not norm_bound or P.norm <= bound:
                out.append(P)
    return sorted(out, key=lambda P: (P.norm, P.p, P.index))


def parse_prime(K: NumberField, sel: str) -> PrimeIdealRec:
    """Resolve a selector ``"p"`` or ``"p:i"``."""
    sel = sel.strip()
    try:
        if ":" in sel:
            ps, is_ = sel.split(":")
            p, i = int(ps), int(is_)
        else:
            p, i = int(sel), None
    except ValueError:
        raise ValueError(f"malformed prime selector {sel!r}") from None
    if not isprime(p):
        raise ValueError(f"prime selector {sel!r}: {p} is not prime")
    primes = split_prime(K, p)
    if i is None:
        if len(primes) != 1:
            raise ValueError(f"prime selector {sel!r} is ambiguous: {len(primes)} primes above {p}")
        return primes[0]
    if not 0 <= i < len(primes):
        raise ValueError(f"prime selector {sel!r}: only {len(primes)} primes above {p}")
    return primes[i]


def prime_power(P: PrimeIdealRec, k: int) -> IdealRec:
    return _prime_power(P, k)


@lru_cache(maxsize=4096)
def _prime_power(P: PrimeIdealRec, k: int) -> IdealRec:
    if k == 0:
        return unit_ideal(P.field)
    if k == 1:
        return P.ideal
    if k < 0:
        return ideal_inverse_prime(P) ** (-k)
    return _prime_power(P, k - 1) * P.ideal


def ideal_inverse_prime(P: PrimeIdealRec) -> IdealRec:
    """``P^-1 = p^-1 * P^(e-1) * prod_{Q != P} Q^(e_Q)``."""
    K = P.field
    r = prime_power(P, P.e - 1)
    for Q in split_prime(K, P.p):
        if Q != P:
            r = r * prime_power(Q, Q.e)
    return IdealRec(K, r.num, r.den * P.p) if r.den == 1 else _make_ideal(K, r.num.columns(), r.den * P.p)


def _val_integral_ideal(I: IdealRec, P: PrimeIdealRec) -> int:
    nrm = I.norm().numerator
    bound = 0
    while nrm % P.p == 0:
        nrm //= P.p
        bound += 1
    k = 0
    while k * P.f < bound + 1 and prime_power(P, k + 1).contains_ideal(I):
        k += 1
    return k


def ideal_valuation(I: IdealRec, P: PrimeIdealRec) -> int:
    num = IdealRec(I.field, I.num, 1)
    d = I.den
    vd = 0
    while d % P.p == 0:
        d //= P.p
        vd += 1
    return _val_integral_ideal(num, P) - vd * P.e


def valuation(a: FieldElement, P: PrimeIdealRec) -> int:
    """Exact P-adic valuation of a nonzero element."""
    if a.is_zero():
        raise ValueError("valuation of zero")
    d = a.denominator
    b = a * d
    vd = 0
    while d % P.p == 0:
        d //= P.p
        vd += 1
    if P.field.degree == 1:
        n = abs(b.coords[0].numerator)
        k = 0
        while n % P.p == 0:
            n //= P.p
            k += 1
        return k - vd * P.e
    return _val_integral_ideal(principal_ideal(b), P) - vd * P.e


def factor_ideal(I: IdealRec) -> dict[PrimeIdealRec, int]:
    """Prime factorization of a fractional ideal."""
    K = I.field
    ps = set(factorint(abs(det(I.num)))) | set(factorint(I.den))
    out = {}
    for p in sorted(ps):
        for P in split_prime(K, p):
            v = ideal_valuation(I, P)
            if v:
                out[P] = v
    return out


def element_support(a: FieldElement) -> list[int]:
    """Rational primes below the primes where ``a`` has nonzero valuation."""
    n = a.norm()
    return sorted(set(factorint(abs(n.numerator))) | set(factorint(n.denominator)))


def factor_element(a: FieldElement) -> dict[PrimeIdealRec, int]:
    out = {}
    for p in element_support(a):
        for P in split_prime(a.field, p):
            v = valuation(a, P)
            if v:
                out[P] = v
    return out


def ideal_from_factorization(K: NumberField, fac: dict[PrimeIdealRec, int]) -> IdealRec:
    r = unit_ideal(K)
    for P, v in fac.items():
        if v:
            r = r * prime_power(P, v)
    return r


def ideal_inverse(I: IdealRec) -> IdealRec:
    return ideal_from_factorization(I.field, {P: -v for P, v in factor_ideal(I).items()})


# ---------------------------------------------------------------------------
# residues


def _cofactor_unit(P: PrimeIdealRec, t: int) -> FieldElement:
    """w in prod_{Q | p, Q != P} Q^(t e_Q) with w = 1 mod P."""
    K = P.field
    others = [Q for Q in split_prime(K, P.p) if Q != P]
    if not others:
        return K.one
    b = unit_ideal(K)
    for Q in others:
        b = b * prime_power(Q, t * Q.e)
    return crt_idempotent(P.ideal, b)


def residue(a: FieldElement, P: PrimeIdealRec):
    """Image of ``a`` in the residue field O/P (requires v_P(a) >= 0)."""
    F = P.residue_field
    p = P.p
    d = a.denominator
    g = a * d
    t = 0
    while d % p == 0:
        d //= p
        t += 1
    if t:
        w = _cofactor_unit(P, t)
        gw = g * w
        if not all(c.numerator % p ** t == 0 for c in gw.coords):
            raise ValueError(f"element has negative valuation at {P}")
        g = gw * Fraction(1, p ** t)
        dw = w * d
    else:
        dw = P.field.from_int(d)
    num = F.reduce([int(c) % p for c in g.coords])
    den = F.reduce([int(c) % p for c in dw.coords])
    if den == F.zero:
        raise ValueError(f"element has negative valuation at {P}")
    return F.mul(num, F.inv(den))


def residue_unit_dlog(a: FieldElement, P: PrimeIdealRec) -> int:
    """Discrete log of a P-unit's residue to the canonical primitive element."""
    r = residue(a, P)
    F = P.residue_field
    if r == F.zero:
        raise ValueError(f"element is not a unit at {P}")
    return F.dlog(r)


def lift_residue(P: PrimeIdealRec, r) -> FieldElement:
    """Integral element with the given residue (coefficients in [0, p))."""
    K = P.field
    x = sum((K.theta ** i * int(c) for i, c in enumerate(r)), K.from_int(0))
    return K.elt(tuple(int(c) % P.p for c in x.coords))


def is_congruent_one(a: FieldElement, P: PrimeIdealRec) -> bool:
    """``a`` is defined and equal to 1 at P."""
    try:
        return residue(a, P) == P.residue_field.one
    except ValueError:
        return False
