"""The acceptance suite: ten end-to-end checks with one pass/fail line each.

Shared by ``tests/test_acceptance.py``, ``scripts/run_acceptance.py`` and the
``selftest`` subcommand of the CLI.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from math import gcd
from typing import Callable

import sympy

from .abgrp import IntMatrix, det, group_from_relations, hnf, snf
from .cft import (principal_cycle, random_unit_witnesses, rec_Q, tame_galois_Q,
                  verify_ff_rec0, verify_reciprocity_Q)
from .cycles import oracle_h0
from .homology import (MV_FIELDS, check_dense_open_surjectivity, check_gysin,
                       check_mv_open_cover, check_mv_second_variable, ff_curve, homology,
                       number_ring, pushforward_norm, random_dense_open_configs,
                       random_mv_base_configs, random_mv_cover_configs)
from .numfield import number_field, split_prime
from .rayclass import modulus


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "failures": self.failures[:5]}


def squarefree_up_to(n: int) -> list[int]:
    return [m for m in range(1, n + 1) if all(e == 1 for e in sympy.factorint(m).values())]


def units_mod_sign(m: int) -> int:
    """``|(Z/m)^x / <-1>|`` by listing residues."""
    units = [a for a in range(m) if gcd(a, m) == 1] if m > 1 else [0]
    classes = {min(a, (-a) % m) for a in units} if m > 1 else {0}
    return len(classes)


# ---------------------------------------------------------------------------
# the ten criteria


def ray_class_vs_residues() -> tuple[bool, str, list]:
    bad = []
    ms = squarefree_up_to(60)
    for m in ms:
        primes = sorted(sympy.factorint(m))
        h0 = homology(number_ring("Q", primes)).h0
        if not h0.is_finite or h0.order != units_mod_sign(m):
            bad.append({"m": m, "h0": h0.to_json(), "expected": units_mod_sign(m)})
    return not bad, f"{len(ms) - len(bad)}/{len(ms)} squarefree m <= 60 agree", bad


ORACLE_CONFIGS = ((5,), (2, 3), (7,))


def oracle_vs_closed_form() -> tuple[bool, str, list]:
    Q = number_field("Q")
    bad, shown = [], []
    for sigma in ORACLE_CONFIGS:
        res = oracle_h0(Q, modulus(Q, sigma), deg_bound=2, height_bound=300, prime_bound=50)
        shown.append(f"{list(sigma)}->{list(res.group.torsion_invariants)}")
        if not (res.stable and res.matches_rayclass):
            bad.append({"sigma": list(sigma), **res.to_json()})
    return not bad, ", ".join(shown), bad


H1_EXPECTED = (("Q", (), (2,)), ("Q", (2, 3), ()), ("x^2+1", (), (4,)), ("x^2-2", (), (2, 0)))


def h1_closed_form() -> tuple[bool, str, list]:
    bad = []
    for f, sigma, inv in H1_EXPECTED:
        h1 = homology(number_ring(f, sigma)).h1
        got = tuple(h1.torsion_invariants) + (0,) * h1.free_rank
        if got != inv:
            bad.append({"field": f, "sigma": list(sigma), "got": list(got), "expected": list(inv)})
    return not bad, f"{len(H1_EXPECTED) - len(bad)}/{len(H1_EXPECTED)} match", bad


def mayer_vietoris(n: int = 20, seed: int = 0) -> tuple[bool, str, list]:
    bad = []
    total = 0
    for f in MV_FIELDS:
        for K, s1, s2 in random_mv_cover_configs(f, n, seed):
            total += 1
            r = check_mv_open_cover(K, s1, s2)
            if not r.exact or r.witness is not None:
                bad.append(r.to_json())
        for x, ru, rv in random_mv_base_configs(f, n, seed):
            total += 1
            r = check_mv_second_variable(x, ru, rv)
            if not r.exact or r.witness is not None:
                bad.append(r.to_json())
    return not bad, f"{total - len(bad)}/{total} sequences exact", bad


GYSIN_HAND_EXAMPLE = [[], [], [2], [4], [2], [], []]


def gysin() -> tuple[bool, str, list]:
    Ki = number_field("x^2+1")
    cases = [
        (number_ring("Q"), [5]),
        (number_ring("Q"), [7, 11]),
        (number_ring(Ki), [split_prime(Ki, 5)[0]]),
        (ff_curve(3, ["inf"]), ["0"]),
    ]
    bad = []
    reports = [check_gysin(x, D) for x, D in cases]
    for r in reports:
        if not r.exact:
            bad.append(r.to_json())
    if reports[0].groups != GYSIN_HAND_EXAMPLE:
        bad.append({"hand_example": reports[0].groups, "expected": GYSIN_HAND_EXAMPLE})
    return not bad, f"{len(cases)} sequences, Spec Z - {{5}} gives {reports[0].groups}", bad


def reciprocity_Q(limit: int = 200, witnesses: int = 100) -> tuple[bool, str, list]:
    bad = []
    ms = squarefree_up_to(limit)
    for m in ms:
        r = verify_reciprocity_Q(m)
        if not r.ok:
            bad.append(r.to_json())
    for m in (5, 12, 35):
        T = tame_galois_Q(m)
        for f in random_unit_witnesses(m, witnesses):
            if not T.group.is_zero(rec_Q(m, principal_cycle(f))):
                bad.append({"m": m, "f": str(f)})
    return not bad, f"{len(ms)} moduli, {3 * witnesses} principal witnesses", bad


FF_REC_CONFIGS = ((2, ("inf",)), (3, ("0", "inf")), (5, ("0", "inf")), (3, ("0", "1", "inf")))
FF_DEGREE_ZERO = {(3, ("0", "inf")): [2], (5, ("0", "inf")): [4]}


def reciprocity_ff() -> tuple[bool, str, list]:
    bad = []
    for q, sigma in FF_REC_CONFIGS:
        r = verify_ff_rec0(q, sigma)
        d = r.details
        ok = r.ok and d["well_defined"] and d["degree_compatible"] and d["degree_zero_isomorphism"]
        want = FF_DEGREE_ZERO.get((q, sigma))
        if want is not None and d["degree_zero_h0"]["invariants"] != want:
            ok = False
        if not ok:
            bad.append(r.to_json())
    return not bad, f"{len(FF_REC_CONFIGS) - len(bad)}/{len(FF_REC_CONFIGS)} curves", bad


def composition_law() -> tuple[bool, str, list]:
    bad = []
    for f, sigma in (("x^2+1", (5,)), ("x^2+5", ())):
        pp = pushforward_norm(number_field(f), sigma)
        if not pp.composite_is_degree():
            bad.append({"field": f, "sigma": list(sigma)})
    return not bad, "f_* f^* = 2 on both", bad


# -- integer linear algebra ---------------------------------------------------


def determinantal_invariants(rows: list[list[int]]) -> list[int]:
    """SNF diagonal from gcds of minors: ``d_1 ... d_i = gcd of i x i minors``."""
    M = sympy.Matrix(rows)
    n, k = M.shape
    out, prev = [], 1
    for i in range(1, min(n, k) + 1):
        g = 0
        for r in itertools.combinations(range(n), i):
            for c in itertools.combinations(range(k), i):
                g = gcd(g, int(M.extract(list(r), list(c)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def brute_force_cokernel_order(rows: list[list[int]], cap: int = 50) -> int | None:
    """``|Z^n / M Z^k|`` by closing the column span inside ``(Z/N)^n``.

    ``N`` is the smallest nonzero maximal minor, a multiple of the exponent;
    returns None if the cokernel is infinite or ``N`` exceeds ``cap``.
    """
    M = sympy.Matrix(rows)
    n, k = M.shape
    if M.rank() < n:
        return None
    N = min(abs(int(M.extract(list(range(n)), list(c)).det()))
            for c in itertools.combinations(range(k), n)
            if M.extract(list(range(n)), list(c)).det() != 0)
    if N > cap:
        return -1
    cols = [tuple(int(M[i, j]) % N for i in range(n)) for j in range(k)]
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for v in frontier:
            for c in cols:
                w = tuple((a + b) % N for a, b in zip(v, c))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return N ** n // len(seen)


def _is_unimodular(m: IntMatrix) -> bool:
    return abs(det(m)) == 1


def snf_hnf_properties(count: int = 400, seed: int = 0) -> tuple[bool, str, list]:
    rng = random.Random(f"snf:{seed}")
    bad = []
    brute = 0
    for _ in range(count):
        n, k = rng.randint(1, 3), rng.randint(1, 3)
        rows = [[rng.randint(-6, 6) for _ in range(k)] for _ in range(n)]
        M = IntMatrix.from_rows(rows, k)
        H = hnf(M)
        if hnf(H) != H:
            bad.append({"rows": rows, "property": "hnf idempotent"})
        d, u, v = snf(M)
        if not (_is_unimodular(u) and _is_unimodular(v)) or u @ M @ v != d:
            bad.append({"rows": rows, "property": "snf transforms"})
        diag = [d[i, i] for i in range(min(n, k)) if d[i, i]]
        if any(d[i, j] for i in range(n) for j in range(k) if i != j):
            bad.append({"rows": rows, "property": "snf diagonal"})
        if any(b % a for a, b in zip(diag, diag[1:])) or any(x < 0 for x in diag):
            bad.append({"rows": rows, "property": "snf divisibility"})
        if diag != determinantal_invariants(rows):
            bad.append({"rows": rows, "property": "determinantal divisors", "snf": diag})
        d2, _, _ = snf(d)
        if d2 != d:
            bad.append({"rows": rows, "property": "snf idempotent"})
        G = group_from_relations(n, M)
        expect = brute_force_cokernel_order(rows)
        if expect is None:
            if G.is_finite:
                bad.append({"rows": rows, "property": "cokernel infinite"})
        elif expect > 0:
            brute += 1
            if G.order != expect:
                bad.append({"rows": rows, "property": "cokernel count", "got": G.order, "brute": expect})
    return not bad, f"{count} random matrices, {brute} brute-force cokernel counts", bad


def dense_open(n: int = 10, seed: int = 0) -> tuple[bool, str, list]:
    bad = []
    for x, extra in random_dense_open_configs(n, seed):
        r = check_dense_open_surjectivity(x, extra)
        if not r.exact:
            bad.append(r.to_json())
    return not bad, f"{n - len(bad)}/{n} restriction maps onto", bad


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "ray class group vs residue enumeration", ray_class_vs_residues),
    (2, "cycle oracle vs ray class group", oracle_vs_closed_form),
    (3, "h1 closed form", h1_closed_form),
    (4, "Mayer-Vietoris exactness", mayer_vietoris),
    (5, "Gysin exactness", gysin),
    (6, "reciprocity over Q", reciprocity_Q),
    (7, "degree-zero reciprocity over F_q(t)", reciprocity_ff),
    (8, "pushforward after pullback is degree", composition_law),
    (9, "SNF/HNF properties", snf_hnf_properties),
    (10, "dense-open surjectivity", dense_open),
]


def run_criterion(number: int) -> CriterionResult:
    _, name, fn = next(c for c in CRITERIA if c[0] == number)
    t = time.perf_counter()
    try:
        passed, detail, failures = fn()
    except Exception as exc:  # a crash is a failed criterion, reported with its message
        passed, detail, failures = False, f"{type(exc).__name__}: {exc}", []
    return CriterionResult(number, name, passed, detail, time.perf_counter() - t, failures)


def run_all(numbers=None, stop_on_failure: bool = False) -> list[CriterionResult]:
    out = []
    for num, _, _ in CRITERIA:
        if numbers and num not in numbers:
            continue
        r = run_criterion(num)
        out.append(r)
        if stop_on_failure and not r.passed:
            break
    return out
