"""h_0 and h_1 of one-dimensional arithmetic schemes and their exact sequences.

Two scheme classes are supported: ``Spec O_{k,Sigma}`` for a supported number
field ``k`` (``NumberRing``) and ``P^1_{F_q} - Sigma`` (``FFCurve``).  Every
checker below assembles a sequence of ``GroupHom`` objects and hands it to
``abgrp.is_exact``; a failure carries the witness found there.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import sympy

from .abgrp import (FGAbelianGroup, GroupHom, IntMatrix, direct_sum, is_exact,
                    scalar_hom, trivial, zero_hom)
from .ffcurve import FFPic, Place, base_field, ff_h0, ff_h1, parse_places
from .numfield import (FieldElement, NumberField, PrimeIdealRec, crt, factor_element, lift_residue,
                       number_field, prime_power, reduce_mod_ideal, residue_unit_dlog, split_prime, valuation)
from .rayclass import (BivariantH0, BivariantH1, Modulus, RayClassGroup, bivariant_h0,
                       bivariant_h1, modulus, ray_class_group, relative_units, residue_units)


# ---------------------------------------------------------------------------
# schemes


@dataclass(frozen=True)
class NumberRing:
    """``Spec O_{k,Sigma}``: the ring of integers with the primes of ``sigma`` removed."""

    k: NumberField
    sigma: Modulus

    def describe(self) -> dict:
        return {"field": self.k.name, "sigma": self.sigma.to_json()}


@dataclass(frozen=True)
class FFCurve:
    """``P^1_{F_q} - Sigma``."""

    q: int
    sigma: tuple[Place, ...]

    def __post_init__(self):
        F = base_field(self.q)
        object.__setattr__(self, "sigma", parse_places(F, self.sigma))

    @property
    def F(self):
        return base_field(self.q)

    def describe(self) -> dict:
        return {"q": self.q, "sigma": [P.format(self.F) for P in self.sigma]}


ArithScheme = NumberRing | FFCurve


def number_ring(field_spec: str | NumberField, sigma: Iterable = ()) -> NumberRing:
    K = number_field(field_spec) if isinstance(field_spec, str) else field_spec
    return NumberRing(K, sigma if isinstance(sigma, Modulus) else modulus(K, sigma))


def ff_curve(q: int, sigma: Iterable = ()) -> FFCurve:
    return FFCurve(q, tuple(sigma) if not isinstance(sigma, str) else sigma)


@dataclass
class HomologyResult:
    scheme: object
    h0: FGAbelianGroup
    h1: FGAbelianGroup

    def h(self, i: int) -> FGAbelianGroup:
        """``h_i``; zero outside degrees 0 and 1."""
        return {0: self.h0, 1: self.h1}.get(i) or trivial()

    def to_json(self) -> dict:
        return {"h0": self.h0.to_json(), "h1": self.h1.to_json()}


def homology(x: ArithScheme) -> HomologyResult:
    if isinstance(x, NumberRing):
        return HomologyResult(x, ray_class_group(x.k, x.sigma).group,
                              relative_units(x.k, x.sigma).group)
    # Sigma is finite and P^1 has infinitely many places, so X is never empty
    return HomologyResult(x, ff_h0(x.q, x.sigma).group, ff_h1(x.q, x.sigma)[0])


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckReport:
    check: str
    config: dict
    exact: bool
    witness: dict | None = None
    groups: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"check": self.check, "config": self.config, "exact": self.exact,
                "witness": self.witness, "groups": self.groups}


def _run(check: str, config: dict, seq: Sequence[GroupHom]) -> CheckReport:
    rep = is_exact(seq)
    groups = [seq[0].source] + [h.target for h in seq]
    inv = [list(g.torsion_invariants) + [0] * g.free_rank for g in groups]
    wit = None if rep.exact else {"node": rep.node, "kind": rep.kind, "element": rep.witness}
    return CheckReport(check, config, rep.exact, wit, inv)


def _hom(src: FGAbelianGroup, tgt: FGAbelianGroup, cols: Sequence[Sequence[int]]) -> GroupHom:
    return GroupHom(src, tgt, IntMatrix.from_columns([tuple(c) for c in cols], tgt.ngens))


def _pad(seq: list[GroupHom]) -> list[GroupHom]:
    """Prepend ``0 -> first`` and append ``last -> 0``."""
    return [zero_hom(trivial(), seq[0].source), *seq, zero_hom(seq[-1].target, trivial())]


def _unit_vec(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


# ---------------------------------------------------------------------------
# natural maps between number-ring groups


def ray_projection(src: RayClassGroup, tgt_group: FGAbelianGroup, tgt_modulus: Modulus,
                   tgt_class_of_prime) -> GroupHom:
    """``C_{m'} -> C_m`` for ``m | m'``: residue generators at primes of ``m``
    keep their role, the others die, class generators go to their classes."""
    n = tgt_group.ngens
    index = {P: i for i, P in enumerate(tgt_modulus)}
    cols = []
    for P in src.modulus:
        cols.append(_unit_vec(n, index[P]) if P in index else (0,) * n)
    for Ij in src.class_gens:
        cols.append(tgt_class_of_prime(Ij))
    return _hom(src.group, tgt_group, cols)


def ray_restriction(K: NumberField, big: Modulus, small: Modulus) -> GroupHom:
    rb, rs = ray_class_group(K, big), ray_class_group(K, small)
    return ray_projection(rb, rs.group, rs.modulus, rs.class_of_prime)


def unit_inclusion(K: NumberField, big: Modulus, small: Modulus) -> GroupHom:
    """``E^{1,big} -> E^{1,small}`` for ``small`` contained in ``big``."""
    ub, us = relative_units(K, big), relative_units(K, small)
    cols = []
    for c in ub.inclusion.matrix.columns():
        x = us.inclusion.preimage(c)
        if x is None:
            raise AssertionError("unit congruent to 1 on the larger set is not in the smaller group")
        cols.append(x)
    return _hom(ub.group, us.group, cols)


def _stack(top: GroupHom, bottom: GroupHom) -> GroupHom:
    """``x -> (top(x), bottom(x))`` into the direct sum of the targets."""
    tgt = direct_sum(top.target, bottom.target)
    return GroupHom(top.source, tgt, top.matrix.vstack(bottom.matrix))


def _difference(left: GroupHom, right: GroupHom) -> GroupHom:
    """``(a, b) -> left(a) - right(b)`` out of the direct sum of the sources."""
    src = direct_sum(left.source, right.source)
    return GroupHom(src, left.target, left.matrix.hstack(right.matrix.scale(-1)))


def _same_source(h: GroupHom, src: FGAbelianGroup) -> GroupHom:
    return GroupHom(src, h.target, h.matrix)


# ---------------------------------------------------------------------------
# Mayer-Vietoris for an open cover


def check_mv_open_cover(K: NumberField, sigma1: Modulus, sigma2: Modulus) -> CheckReport:
    """``X_i = Spec O_{k,Sigma_i}`` cover ``X = Spec O_{k, Sigma_1 cap Sigma_2}``."""
    s1 = sigma1 if isinstance(sigma1, Modulus) else modulus(K, sigma1)
    s2 = sigma2 if isinstance(sigma2, Modulus) else modulus(K, sigma2)
    s12 = s1.union(s2)
    s0 = modulus(K, [P for P in s1 if P in s2])
    a = _stack(unit_inclusion(K, s12, s1), unit_inclusion(K, s12, s2))
    b = _difference(unit_inclusion(K, s1, s0), unit_inclusion(K, s2, s0))
    b = _same_source(b, a.target)
    r12 = ray_class_group(K, s12)
    e0 = relative_units(K, s0)
    cols = []
    for u in e0.generators:
        # beta = 1 on Sigma_1 and beta = u on Sigma_2 - Sigma_1
        vec = [0 if P in s1 else residue_unit_dlog(u, P) for P in s12]
        cols.append(tuple(vec) + (0,) * len(r12.class_gens))
    delta = GroupHom(b.target, r12.group, IntMatrix.from_columns(cols, r12.ngens))
    c = _stack(ray_restriction(K, s12, s1), ray_restriction(K, s12, s2))
    d = _difference(ray_restriction(K, s1, s0), ray_restriction(K, s2, s0))
    d = _same_source(d, c.target)
    seq = _pad([a, b, delta, c, d])
    config = {"field": K.name, "sigma1": s1.to_json(), "sigma2": s2.to_json()}
    return _run("mv-cover", config, seq)


# ---------------------------------------------------------------------------
# Mayer-Vietoris in the base


def primes_above(K: NumberField, rational: Iterable[int]) -> tuple[PrimeIdealRec, ...]:
    return tuple(sorted({P for p in rational for P in split_prime(K, p)}))


def _h1_map(src: BivariantH1, tgt: BivariantH1) -> GroupHom:
    cols = []
    for x in src.generators():
        c = tgt.inclusion.preimage(tgt.sunits.coordinates(x))
        if c is None:
            raise AssertionError(f"{x} does not lie in the target unit group")
        cols.append(c)
    return _hom(src.group, tgt.group, cols)


def _h0_map(src: BivariantH0, tgt: BivariantH0) -> GroupHom:
    """Induced by ``C_{Sigma - A} -> C_{Sigma - A'}`` on the quotients."""
    h = ray_projection(src.ray, tgt.group, tgt.ray.modulus, tgt.class_of_prime)
    return GroupHom(src.group, tgt.group, h.matrix)


def _is_smooth(n: int, bound: int) -> bool:
    return n != 0 and all(p <= bound for p in sympy.factorint(abs(n), limit=bound))


def _smooth_lift(K: NumberField, targets, bound: int = 1000, radius: int = 4) -> FieldElement:
    """CRT solution whose norm has no prime factor above ``bound`` when one is
    near; classifying large primes would otherwise dominate the running time."""
    g0 = crt(targets)
    M = targets[0][0]
    for m, _ in targets[1:]:
        M = M * m
    base = reduce_mod_ideal(g0.int_coords(), M)
    cols = M.num.columns()
    box = sorted(itertools.product(range(-radius, radius + 1), repeat=K.degree),
                 key=lambda c: sum(map(abs, c)))
    for c in box:
        v = [b + sum(ci * col[i] for ci, col in zip(c, cols)) for i, b in enumerate(base)]
        g = K.elt(v)
        if not g.is_zero() and _is_smooth(int(g.norm()), bound):
            return g
    return g0


def _base_delta(K: NumberField, sigma: Modulus, AU: set, AV: set,
                src: BivariantH1, tgt: BivariantH0) -> GroupHom:
    """Connecting map ``h_1(X, U cap V) -> h_0(X, U cup V)``.

    For an ``A``-unit ``u = y/d`` pick ``f`` congruent to 1 at the primes of
    Sigma outside ``A_V`` and to ``u`` at the primes of Sigma in ``A_V - A_U``;
    the image is the class of ``div(f) - sum_{P in A_V - A_U} v_P(u) P``.  Two
    choices of ``f`` differ by a ray-trivial element, so the recipe is a
    homomorphism on all ``A``-units; it is evaluated on the S-unit generators
    (kernel generators can be huge) and composed with the inclusion.
    """
    only_v = AV - AU
    su_cols = []
    for u in src.sunits.generators:
        d = u.denominator
        y = u * d
        targets = []
        for P in sigma:
            if P in AU and P in AV:
                continue
            tau = y if P in only_v else K.from_int(d)
            targets.append((prime_power(P, valuation(tau, P) + 1), tau))
        g = _smooth_lift(K, targets) if targets else K.from_int(d)
        fac = factor_element(g / K.from_int(d))
        for P in only_v:
            fac[P] = fac.get(P, 0) - valuation(u, P)
        fac = {P: v for P, v in fac.items() if v and not (P in AU and P in AV)}
        su_cols.append(tgt.class_of_factorization(fac))
    on_sunits = IntMatrix.from_columns(su_cols, tgt.group.ngens)
    return GroupHom(src.group, tgt.group, on_sunits @ src.inclusion.matrix)


def check_mv_second_variable(x: NumberRing, removed_u: Iterable[int],
                             removed_v: Iterable[int]) -> CheckReport:
    """``U, V`` are the opens of ``Spec Z`` missing the rational primes given."""
    K, sigma = x.k, x.sigma
    ru, rv = set(removed_u), set(removed_v)
    A = {"u": set(primes_above(K, ru)), "v": set(primes_above(K, rv))}
    A["cup"] = A["u"] & A["v"]
    A["cap"] = A["u"] | A["v"]
    H1 = {w: bivariant_h1(K, sigma, a) for w, a in A.items()}
    H0 = {w: bivariant_h0(K, sigma, a) for w, a in A.items()}
    a = _stack(_h1_map(H1["cup"], H1["u"]), _h1_map(H1["cup"], H1["v"]))
    b = _same_source(_difference(_h1_map(H1["u"], H1["cap"]), _h1_map(H1["v"], H1["cap"])), a.target)
    delta = _base_delta(K, sigma, A["u"], A["v"], H1["cap"], H0["cup"])
    c = _stack(_h0_map(H0["cup"], H0["u"]), _h0_map(H0["cup"], H0["v"]))
    d = _same_source(_difference(_h0_map(H0["u"], H0["cap"]), _h0_map(H0["v"], H0["cap"])), c.target)
    seq = _pad([a, b, delta, c, d])
    config = {"field": K.name, "sigma": sigma.to_json(),
              "removed_u": sorted(ru), "removed_v": sorted(rv)}
    return _run("mv-base", config, seq)


# ---------------------------------------------------------------------------
# Gysin


def _check_gysin_number(x: NumberRing, D: Sequence[PrimeIdealRec]) -> CheckReport:
    K, sigma = x.k, x.sigma
    D = tuple(sorted(set(D)))
    if not D:
        raise ValueError("the removed set D must be nonempty")
    for P in D:
        if P in sigma:
            raise ValueError(f"{P.selector} already lies in Sigma")
    su = sigma.union(D)
    h1x = relative_units(K, sigma)
    resD = residue_units(K, modulus(K, D))
    ru = ray_class_group(K, su)
    a = unit_inclusion(K, su, sigma)
    b = _hom(h1x.group, resD.group, [resD.dlog(u) for u in h1x.generators])
    index = {P: i for i, P in enumerate(su)}
    c = _hom(resD.group, ru.group, [_unit_vec(ru.ngens, index[P]) for P in D])
    d = ray_restriction(K, su, sigma)
    config = {"field": K.name, "sigma": sigma.to_json(), "removed": [P.selector for P in D]}
    return _run("gysin", config, _pad([a, b, c, d]))


def _ff_h1_map(q: int, big: Sequence[Place], small: Sequence[Place]) -> GroupHom:
    gb, ib = ff_h1(q, big)
    gs, is_ = ff_h1(q, small)
    cols = []
    for col in ib.matrix.columns():
        y = is_.preimage(col)
        if y is None:
            raise AssertionError("constant congruent to 1 on the larger set is missing")
        cols.append(y)
    return _hom(gb, gs, cols)


def ff_projection(big: FFPic, small: FFPic) -> GroupHom:
    """``Pic(P^1, big) -> Pic(P^1, small)`` for ``small`` contained in ``big``."""
    index = {P: i for i, P in enumerate(small.sigma)}
    cols = [_unit_vec(small.ngens, index[P]) if P in index else (0,) * small.ngens
            for P in big.sigma]
    cols.append(small.class_of(big.d0))
    return _hom(big.group, small.group, cols)


def _check_gysin_ff(x: FFCurve, D: Sequence) -> CheckReport:
    F = x.F
    D = parse_places(F, D)
    if not D:
        raise ValueError("the removed set D must be nonempty")
    for P in D:
        if P in x.sigma:
            raise ValueError(f"{P.format(F)} already lies in Sigma")
    su = parse_places(F, tuple(x.sigma) + tuple(D))
    pu, px, pd = ff_h0(F, su), ff_h0(F, x.sigma), ff_h0(F, D)
    h1x, incx = ff_h1(F, x.sigma)
    a = _ff_h1_map(F, su, x.sigma)
    b = pd.constants_hom().compose(incx)
    index = {P: i for i, P in enumerate(su)}
    c = _hom(b.target, pu.group, [_unit_vec(pu.ngens, index[P]) for P in D])
    d = ff_projection(pu, px)
    config = {"q": x.q, "sigma": [P.format(F) for P in x.sigma], "removed": [P.format(F) for P in D]}
    return _run("gysin", config, _pad([a, b, c, d]))


def check_gysin(x: ArithScheme, D: Iterable) -> CheckReport:
    """``0 -> h_1(U) -> h_1(X) -> (+)_{P in D} k(P)^x -> h_0(U) -> h_0(X) -> 0``, ``U = X - D``."""
    if isinstance(x, NumberRing):
        return _check_gysin_number(x, list(modulus(x.k, D)))
    return _check_gysin_ff(x, D)


# ---------------------------------------------------------------------------
# pushforward and pullback along Spec O' -> Spec Z


@dataclass
class PushPull:
    push: GroupHom  # f_*: C_{m'}(k') -> C_m(Q)
    pull: GroupHom  # f^*: C_m(Q) -> C_{m'}(k')
    degree: int

    def composite_is_degree(self) -> bool:
        return self.push.compose(self.pull).equals(scalar_hom(self.pull.source, self.degree))


def _int_crt(targets: Sequence[tuple[int, int]]) -> int:
    from sympy.ntheory.modular import crt as _crt
    if not targets:
        return 1
    r = _crt([m for m, _ in targets], [t for _, t in targets])
    return int(r[0]) if r else 1


def pushforward_norm(Kp: NumberField, sigma: Iterable[int]) -> PushPull:
    """Norm and extension of ideals between ``C_m(Q)`` and ``C_{m'}(k')``."""
    Q = number_field("Q")
    rat = sorted(set(int(p) for p in sigma))
    m = modulus(Q, rat)
    mp = modulus(Kp, primes_above(Kp, rat))
    R, Rp = ray_class_group(Q, m), ray_class_group(Kp, mp)
    pull_cols = []
    for P in m:
        g = P.residue_field.primitive_element
        gp = int(g[0]) if isinstance(g, (tuple, list)) else int(g)
        b = _int_crt([(P.p, gp)] + [(Pq.p, 1) for Pq in m if Pq != P])
        pull_cols.append(Rp.iota(Kp.from_int(b)))
    pull = _hom(R.group, Rp.group, pull_cols)
    push_cols = []
    for P in mp:
        g = P.residue_field.primitive_element
        targets = [(P.ideal, lift_residue(P, g))]
        targets += [(Pq.ideal, Kp.one) for Pq in mp if Pq != P]
        b = crt(targets)
        push_cols.append(R.iota(Q.from_int(int(b.norm()))))
    for Ij in Rp.class_gens:
        Pq = split_prime(Q, Ij.p)[0]
        push_cols.append(R.class_of_factorization({Pq: Ij.f}))
    push = _hom(Rp.group, R.group, push_cols)
    return PushPull(push, pull, Kp.degree)


# ---------------------------------------------------------------------------
# dense opens


def check_dense_open_surjectivity(x: ArithScheme, extra: Iterable) -> CheckReport:
    """``h_0(U) -> h_0(X)`` is onto for ``U = X - extra``."""
    if isinstance(x, NumberRing):
        big = x.sigma.union(modulus(x.k, extra))
        h = ray_restriction(x.k, big, x.sigma)
        config = {"field": x.k.name, "sigma": x.sigma.to_json(), "extra": big.minus(x.sigma).to_json()}
    else:
        F = x.F
        big = parse_places(F, tuple(x.sigma) + tuple(parse_places(F, extra)))
        h = ff_projection(ff_h0(F, big), ff_h0(F, x.sigma))
        config = {"q": x.q, "sigma": [P.format(F) for P in x.sigma],
                  "extra": [P.format(F) for P in big if P not in x.sigma]}
    rep = _run("dense-open", config, [h, zero_hom(h.target, trivial())])
    return rep


# ---------------------------------------------------------------------------
# seeded configurations


SMALL_PRIMES = (2, 3, 5, 7, 11, 13)
MV_FIELDS = ("Q", "x^2+1", "x^2+5")


def _random_prime_set(rng: random.Random, K: NumberField, k: int) -> list[PrimeIdealRec]:
    pool = [P for p in SMALL_PRIMES for P in split_prime(K, p)]
    return sorted(rng.sample(pool, rng.randint(0, min(k, len(pool)))))


def random_mv_cover_configs(field_spec: str, n: int = 20, seed: int = 0) -> list[tuple]:
    rng = random.Random(f"mv-cover:{field_spec}:{seed}")
    K = number_field(field_spec)
    return [(K, modulus(K, _random_prime_set(rng, K, 2)), modulus(K, _random_prime_set(rng, K, 2)))
            for _ in range(n)]


def random_mv_base_configs(field_spec: str, n: int = 20, seed: int = 0) -> list[tuple]:
    rng = random.Random(f"mv-base:{field_spec}:{seed}")
    K = number_field(field_spec)
    out = []
    for _ in range(n):
        sigma = modulus(K, _random_prime_set(rng, K, 2))
        ru = rng.sample(SMALL_PRIMES, rng.randint(0, 2))
        rv = rng.sample(SMALL_PRIMES, rng.randint(0, 2))
        out.append((NumberRing(K, sigma), sorted(ru), sorted(rv)))
    return out


def random_dense_open_configs(n: int = 10, seed: int = 0) -> list[tuple]:
    rng = random.Random(f"dense-open:{seed}")
    out = []
    for i in range(n):
        if i % 4 == 3:
            q = rng.choice((2, 3, 5))
            pool = ["inf"] + [str(a) for a in range(q)]
            chosen = rng.sample(pool, 3)
            out.append((FFCurve(q, tuple(chosen[:1])), tuple(chosen[1:])))
            continue
        K = number_field(rng.choice(MV_FIELDS))
        pool = [P for p in SMALL_PRIMES for P in split_prime(K, p)]
        chosen = rng.sample(pool, rng.randint(1, 4))
        k = rng.randint(0, len(chosen) - 1)
        out.append((NumberRing(K, modulus(K, chosen[:k])), tuple(chosen[k:])))
    return out
