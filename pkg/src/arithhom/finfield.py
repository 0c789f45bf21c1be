"""Finite fields, polynomials over them, and Cantor-Zassenhaus factorization.

Elements of ``PrimeField(p)`` are ints in ``[0, p)``; elements of an
``ExtensionField`` are tuples of base-field elements (coefficients of the
residue polynomial, low degree first).  Polynomials are lists of field
elements, low degree first, with no trailing zeros.
"""

from __future__ import annotations

import hashlib
import random
from functools import cached_property
from itertools import product
from math import isqrt

from sympy import factorint, isprime


class PrimeField:
    def __init__(self, p: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.q = p
        self.degree = 1
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, n):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def from_int(self, n: int):
        return n % self.p

    def to_int(self, a) -> int:
        return a

    def elements(self):
        return range(self.p)

    def random_element(self, rng: random.Random):
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class ExtensionField:
    """``base[x] / (modulus)`` for a monic irreducible modulus of degree >= 1."""

    def __init__(self, base, modulus):
        modulus = list(modulus)
        if modulus[-1] != base.one:
            raise ValueError("modulus must be monic")
        self.base = base
        self.modulus = tuple(modulus)
        self.degree = len(modulus) - 1
        self.p = base.p
        self.q = base.q ** self.degree
        self.zero = (base.zero,) * self.degree
        self.one = (base.one,) + (base.zero,) * (self.degree - 1)
        self._dlog_cache: dict = {}

    def _pad(self, poly):
        poly = list(poly)
        return tuple(poly + [self.base.zero] * (self.degree - len(poly)))

    def reduce(self, poly):
        """Residue of a base-field polynomial."""
        _, r = poly_divmod(self.base, list(poly), list(self.modulus))
        return self._pad(r)

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        return self.reduce(poly_mul(self.base, poly_trim(self.base, list(a)), poly_trim(self.base, list(b))))

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def from_int(self, n: int):
        """Base-q digit encoding: the i-th digit is the coefficient of x^i."""
        digits = []
        bq = self.base.q
        for _ in range(self.degree):
            digits.append(self.base.from_int(n % bq))
            n //= bq
        return tuple(digits)

    def to_int(self, a) -> int:
        bq = self.base.q
        return sum(self.base.to_int(c) * bq ** i for i, c in enumerate(a))

    def elements(self):
        for n in range(self.q):
            yield self.from_int(n)

    def random_element(self, rng: random.Random):
        return tuple(self.base.random_element(rng) for _ in range(self.degree))

    def embed(self, c):
        """Base-field element as a constant of this field."""
        return (c,) + (self.base.zero,) * (self.degree - 1)

    # -- multiplicative structure ------------------------------------------------

    @cached_property
    def unit_order_factors(self) -> dict[int, int]:
        return factorint(self.q - 1)

    def is_primitive(self, a) -> bool:
        if a == self.zero:
            return False
        n = self.q - 1
        return all(self.pow(a, n // r) != self.one for r in self.unit_order_factors)

    @cached_property
    def primitive_element(self):
        """Smallest primitive element in the base-q digit ordering."""
        for n in range(1, self.q):
            a = self.from_int(n)
            if self.is_primitive(a):
                return a
        raise AssertionError("no primitive element found")

    def dlog(self, a, base=None) -> int:
        """Discrete log to the primitive element (or ``base``) by baby-step giant-step."""
        g = self.primitive_element if base is None else base
        n = self.q - 1
        if n > 10 ** 8:
            raise ValueError(f"unit group of order {n} exceeds the dlog cap")
        if a == self.zero:
            raise ZeroDivisionError("discrete log of zero")
        key = g
        table = self._dlog_cache.get(key)
        m = isqrt(n) + 1
        if table is None:
            table = {}
            x = self.one
            for j in range(m):
                table.setdefault(x, j)
                x = self.mul(x, g)
            self._dlog_cache[key] = table
        step = self.pow(g, -m)
        y = a
        for i in range(m + 1):
            j = table.get(y)
            if j is not None:
                return (i * m + j) % n
            y = self.mul(y, step)
        raise ValueError("element not in the subgroup generated by the base")

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and self.base == other.base and self.modulus == other.modulus

    def __hash__(self):
        return hash(("E", self.base, self.modulus))

    def __repr__(self):
        return f"GF({self.q})[{self.modulus}]"


def prime_residue_field(p: int) -> ExtensionField:
    """F_p viewed as the degree-one extension ``F_p[x]/(x)``."""
    return _prime_ext_cache.setdefault(p, ExtensionField(PrimeField(p), (0, 1)))


_prime_ext_cache: dict[int, ExtensionField] = {}


# ---------------------------------------------------------------------------
# Polynomials over a field


def poly_trim(F, a: list) -> list:
    while a and a[-1] == F.zero:
        a.pop()
    return a


def poly_add(F, a, b):
    n = max(len(a), len(b))
    out = [F.add(a[i] if i < len(a) else F.zero, b[i] if i < len(b) else F.zero) for i in range(n)]
    return poly_trim(F, out)


def poly_sub(F, a, b):
    n = max(len(a), len(b))
    out = [F.sub(a[i] if i < len(a) else F.zero, b[i] if i < len(b) else F.zero) for i in range(n)]
    return poly_trim(F, out)


def poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == F.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(F, out)


def poly_scale(F, a, c):
    return poly_trim(F, [F.mul(c, x) for x in a])


def poly_divmod(F, a, b):
    a = poly_trim(F, list(a))
    b = poly_trim(F, list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(b[-1])
    q = [F.zero] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and r:
        c = F.mul(r[-1], inv_lead)
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] = F.sub(r[i + k], F.mul(c, y))
        poly_trim(F, r)
    return poly_trim(F, q), r


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def poly_monic(F, a):
    if not a:
        return a
    return poly_scale(F, a, F.inv(a[-1]))


def poly_gcd(F, a, b):
    a, b = poly_trim(F, list(a)), poly_trim(F, list(b))
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_powmod(F, a, n, m):
    r = [F.one]
    a = poly_mod(F, a, m)
    while n:
        if n & 1:
            r = poly_mod(F, poly_mul(F, r, a), m)
        a = poly_mod(F, poly_mul(F, a, a), m)
        n >>= 1
    return r


def poly_deriv(F, a):
    out = []
    for i in range(1, len(a)):
        c = F.zero
        for _ in range(i % F.p):
            c = F.add(c, a[i])
        out.append(c)
    return poly_trim(F, out)


def poly_eval(F, a, x):
    r = F.zero
    for c in reversed(a):
        r = F.add(F.mul(r, x), c)
    return r


def poly_pow(F, a, n):
    r = [F.one]
    for _ in range(n):
        r = poly_mul(F, r, a)
    return r


def _pth_root(F, a):
    """Inverse Frobenius on a polynomial whose derivative vanishes."""
    # c -> c^(q/p) inverts c -> c^p on F_q
    qp = F.q // F.p
    return poly_trim(F, [F.pow(a[i], qp) for i in range(0, len(a), F.p)])


def _seed_for(F, f) -> int:
    key = repr((F.q, getattr(F, "modulus", None), [F.to_int(c) for c in f]))
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


def _squarefree(F, f):
    """List of (squarefree factor, multiplicity) with f = prod g_i^{m_i}, f monic."""
    out = []
    fp = poly_deriv(F, f)
    if not fp:
        for g, m in _squarefree(F, _pth_root(F, f)):
            out.append((g, m * F.p))
        return out
    c = poly_gcd(F, f, fp)
    w = poly_divmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = poly_gcd(F, w, c)
        z = poly_divmod(F, w, y)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = poly_divmod(F, c, y)[0]
    if len(c) > 1:
        for g, m in _squarefree(F, _pth_root(F, c)):
            out.append((g, m * F.p))
    return out


def _distinct_degree(F, f):
    out = []
    x = [F.zero, F.one]
    h = x
    d = 0
    while 2 * (d + 1) <= len(f) - 1:
        d += 1
        h = poly_powmod(F, h, F.q, f)
        g = poly_gcd(F, f, poly_sub(F, h, x))
        if len(g) > 1:
            out.append((g, d))
            f = poly_divmod(F, f, g)[0]
            h = poly_mod(F, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _equal_degree(F, f, d, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = poly_trim(F, [F.random_element(rng) for _ in range(n)])
        if len(a) < 2:
            continue
        if F.q % 2:
            t = poly_powmod(F, a, (F.q ** d - 1) // 2, f)
            t = poly_sub(F, t, [F.one])
        else:
            # absolute trace to F_2: a + a^2 + ... + a^(2^(k d - 1)), q = 2^k
            k = (F.q.bit_length() - 1) * d
            t, s = list(a), list(a)
            for _ in range(k - 1):
                s = poly_mod(F, poly_mul(F, s, s), f)
                t = poly_add(F, t, s)
        g = poly_gcd(F, f, t)
        if 1 < len(g) < len(f):
            return _equal_degree(F, g, d, rng) + _equal_degree(F, poly_divmod(F, f, g)[0], d, rng)


def factor_poly(F, f) -> list[tuple[list, int]]:
    """Monic irreducible factors with multiplicity, sorted by (degree, coefficients)."""
    f = poly_trim(F, list(f))
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    f = poly_monic(F, f)
    rng = random.Random(_seed_for(F, f))
    out = []
    for g, m in _squarefree(F, f):
        for h, d in _distinct_degree(F, g):
            for irr in _equal_degree(F, h, d, rng):
                out.append((irr, m))
    merged: dict[tuple, int] = {}
    for g, m in out:
        merged[tuple(g)] = merged.get(tuple(g), 0) + m
    return sorted(((list(g), m) for g, m in merged.items()),
                  key=lambda t: (len(t[0]), [F.to_int(c) for c in reversed(t[0])]))


def is_irreducible(F, f) -> bool:
    f = poly_trim(F, list(f))
    if len(f) < 2:
        return False
    fac = factor_poly(F, f)
    return len(fac) == 1 and fac[0][1] == 1


def monic_polys(F, d: int):
    """All monic polynomials of degree d in base-q lexicographic order."""
    elems = list(F.elements())
    for coeffs in product(elems, repeat=d):
        yield list(coeffs[::-1]) + [F.one]


def monic_irreducibles(F, d: int):
    for f in monic_polys(F, d):
        if is_irreducible(F, f):
            yield f


def finite_field(q: int, modulus=None):
    """F_q: a prime field, or F_p[x]/(modulus) with the smallest irreducible modulus by default."""
    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = fac.items()
    if q > 2 ** 16:
        raise ValueError(f"q = {q} exceeds 2^16")
    base = PrimeField(p)
    if e == 1:
        return base
    if modulus is None:
        modulus = next(monic_irreducibles(base, e))
    elif not is_irreducible(base, modulus) or len(modulus) - 1 != e:
        raise ValueError(f"modulus {modulus} is not irreducible of degree {e} over F_{p}")
    return ExtensionField(base, modulus)


# ---------------------------------------------------------------------------
# Integer-polynomial helpers


def factor_poly_mod_p(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Factor an integer polynomial (low degree first) over F_p."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    F = PrimeField(p)
    fr = poly_trim(F, [c % p for c in f])
    if not fr:
        raise ValueError(f"polynomial vanishes mod {p}")
    if len(fr) == 1:
        return []
    return factor_poly(F, fr)
