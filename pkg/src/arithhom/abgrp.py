"""Exact integer linear algebra and finitely generated abelian groups.

Every group is presented by generators and a relation matrix whose
*columns* are relators.  The Smith normal form of the relation matrix gives
the isomorphism type and a change of basis into cyclic coordinates.

>>> G = group_from_relations(2, IntMatrix.from_rows([[2, 0], [0, 3]]))
>>> G.invariants
(6,)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable integer matrix with an explicit shape (allows 0 rows/cols)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable[int]] | None = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = tuple((0,) * cols for _ in range(rows))
        else:
            self._data = tuple(tuple(int(x) for x in r) for r in data)
        if len(self._data) != rows or any(len(r) != cols for r in self._data):
            raise ValueError(f"data does not have shape {rows}x{cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            data[i][i] = d
        return cls(rows, cols, data)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, [self.col(j) for j in range(self.cols)])

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntMatrix(
            self.rows,
            other.cols,
            [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data],
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._data)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + other.scale(-1)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, [[k * a for a in r] for r in self._data])

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols,
                         [r + s for r, s in zip(self._data, other._data)])

    def vstack(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, self._data + other._data)

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(idx), self.cols, [self._data[i] for i in idx])

    def select_cols(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix(self.rows, len(idx), [[r[j] for j in idx] for r in self._data])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.tolist()})"


def det(m: IntMatrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = m.rows
    if n != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    n = m.rows
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.tolist())]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = [[x for x in r[n:]] for r in a]
    if any(x.denominator != 1 for r in out for x in r):
        raise ValueError("matrix is not unimodular")
    return IntMatrix(n, n, [[int(x) for x in r] for r in out])


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Hermite normal form (column style)


def _hnf_cols(cols: list[list[int]], nrows: int, track: list[list[int]] | None):
    """In-place column HNF on a list of column vectors.

    Returns the pivot rows (one per nonzero output column, in order).
    ``track`` holds the transform's columns and receives the same operations.
    """
    ncols = len(cols)
    k = 0
    pivots: list[int] = []
    for i in range(nrows):
        if k >= ncols:
            break
        for j in range(k + 1, ncols):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[k][i]
            if a == 0:
                cols[k], cols[j] = cols[j], cols[k]
                if track is not None:
                    track[k], track[j] = track[j], track[k]
                continue
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            ck, cj = cols[k], cols[j]
            cols[k] = [s * x + t * y for x, y in zip(ck, cj)]
            cols[j] = [bg * x - ag * y for x, y in zip(ck, cj)]
            if track is not None:
                tk, tj = track[k], track[j]
                track[k] = [s * x + t * y for x, y in zip(tk, tj)]
                track[j] = [bg * x - ag * y for x, y in zip(tk, tj)]
        piv = cols[k][i]
        if piv == 0:
            continue
        if piv < 0:
            cols[k] = [-x for x in cols[k]]
            if track is not None:
                track[k] = [-x for x in track[k]]
            piv = -piv
        for j in range(k):
            q = cols[j][i] // piv
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[k])]
                if track is not None:
                    track[j] = [x - q * y for x, y in zip(track[j], track[k])]
        pivots.append(i)
        k += 1
    return pivots


def hnf(m: IntMatrix) -> IntMatrix:
    """Column-style Hermite normal form.

    The column lattice is preserved.  The result is lower echelon: each pivot
    is positive and the entries of its row left of it lie in ``[0, pivot)``;
    zero columns come last.
    """
    cols = [list(c) for c in m.columns()]
    _hnf_cols(cols, m.rows, None)
    return IntMatrix.from_columns(cols, m.rows)


def hnf_with_transform(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, int]:
    """Return ``(H, V, rank)`` with ``m @ V == H`` and ``V`` unimodular."""
    cols = [list(c) for c in m.columns()]
    track = [[int(i == j) for i in range(m.cols)] for j in range(m.cols)]
    pivots = _hnf_cols(cols, m.rows, track)
    return IntMatrix.from_columns(cols, m.rows), IntMatrix.from_columns(track, m.cols), len(pivots)


def lattice_basis(m: IntMatrix) -> IntMatrix:
    """Nonzero HNF columns: a canonical basis of the column lattice."""
    cols = [list(c) for c in m.columns()]
    piv = _hnf_cols(cols, m.rows, None)
    return IntMatrix.from_columns(cols[: len(piv)], m.rows)


def nullspace(m: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel ``{x : m x = 0}``."""
    _, v, rank = hnf_with_transform(m)
    return v.select_cols(range(rank, m.cols))


class Lattice:
    """Column lattice in Z^n with exact membership and coordinate solving."""

    def __init__(self, gens: IntMatrix):
        self.dim = gens.rows
        h, v, rank = hnf_with_transform(gens)
        self.rank = rank
        self._basis = [list(h.col(j)) for j in range(rank)]
        self._transform = v
        self._gens = gens
        self._pivots = []
        j = 0
        for i in range(self.dim):
            if j < rank and self._basis[j][i] != 0:
                self._pivots.append(i)
                j += 1

    @property
    def basis(self) -> IntMatrix:
        return IntMatrix.from_columns(self._basis, self.dim)

    def solve_basis(self, x: Sequence[int]) -> list[int] | None:
        r = list(x)
        if len(r) != self.dim:
            raise ValueError("vector length does not match lattice dimension")
        c = []
        for j, i in enumerate(self._pivots):
            q, rem = divmod(r[i], self._basis[j][i])
            if rem:
                return None
            c.append(q)
            if q:
                r = [a - q * b for a, b in zip(r, self._basis[j])]
        if any(r):
            return None
        return c

    def __contains__(self, x: Sequence[int]) -> bool:
        return self.solve_basis(x) is not None

    def solve(self, x: Sequence[int]) -> list[int] | None:
        """Integer coefficients on the original generators, or None."""
        c = self.solve_basis(x)
        if c is None:
            return None
        full = c + [0] * (self._gens.cols - self.rank)
        return list(self._transform.apply(full))


# ---------------------------------------------------------------------------
# Smith normal form


def snf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(d, u, v)`` with ``u @ m @ v == d``.

    ``u`` and ``v`` are unimodular; the diagonal of ``d`` is nonnegative with
    each entry dividing the next and zeros last.
    """
    r, c = m.rows, m.cols
    a = m.tolist()
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return IntMatrix(r, c, a), IntMatrix(r, r, u), IntMatrix(c, c, v)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, r)) or any(a[t][j] for j in range(t + 1, c)):
                continue
            bad = next((i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix(r, c, a), IntMatrix(r, r, u), IntMatrix(c, c, v)


# ---------------------------------------------------------------------------
# Groups


@dataclass(frozen=True, eq=False)
class FGAbelianGroup:
    """``Z^ngens / (column span of relations)``.

    ``invariants`` lists d1 | d2 | ... with unit entries dropped, followed by
    one zero per free generator.  ``transform`` maps a generator-coordinate
    vector to those cyclic coordinates.
    """

    ngens: int
    relations: IntMatrix
    invariants: tuple[int, ...]
    transform: IntMatrix
    _back: IntMatrix = field(repr=False)
    _lattice: Lattice = field(repr=False)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def torsion_invariants(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Group order, or None when infinite."""
        return prod(self.invariants) if self.is_finite else None

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    def coords(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical cyclic coordinates of an element, reduced mod each invariant."""
        y = self.transform.apply(x)
        return tuple(yi % d if d else yi for yi, d in zip(y, self.invariants))

    def from_coords(self, y: Sequence[int]) -> tuple[int, ...]:
        return self._back.apply(y)

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.coords(x))

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.is_zero([a - b for a, b in zip(x, y)])

    def element_order(self, x: Sequence[int]) -> int | None:
        o = 1
        for yi, d in zip(self.coords(x), self.invariants):
            if yi == 0:
                continue
            if d == 0:
                return None
            o = o * (d // gcd(d, yi)) // gcd(o, d // gcd(d, yi))
        return o

    def gen(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.ngens))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def relation_lattice(self) -> Lattice:
        return self._lattice

    def same_presentation(self, other: FGAbelianGroup) -> bool:
        return (self.ngens == other.ngens
                and lattice_basis(self.relations) == lattice_basis(other.relations))

    def elements(self, limit: int = 100000) -> Iterable[tuple[int, ...]]:
        """Enumerate a finite group (generator coordinates, via cyclic coordinates)."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        if self.order > limit:
            raise ValueError(f"group of order {self.order} exceeds enumeration limit")
        from itertools import product as iproduct
        for y in iproduct(*[range(d) for d in self.invariants]):
            yield self.from_coords(y)

    def to_json(self) -> dict:
        return {"invariants": list(self.torsion_invariants), "free_rank": self.free_rank}

    def __repr__(self) -> str:
        if self.is_trivial:
            return "FGAbelianGroup(0)"
        parts = [f"Z/{d}" if d else "Z" for d in self.invariants]
        return f"FGAbelianGroup({' + '.join(parts)})"


def group_from_relations(ngens: int, relations: IntMatrix | None = None) -> FGAbelianGroup:
    """Present ``Z^ngens`` modulo the column span of ``relations``."""
    if relations is None:
        relations = IntMatrix.zero(ngens, 0)
    if relations.rows != ngens:
        raise ValueError(f"relation matrix has {relations.rows} rows, expected {ngens}")
    basis = lattice_basis(relations)
    d, u, _ = snf(basis)
    diag = [d[i, i] for i in range(min(d.rows, d.cols))] + [0] * (ngens - min(d.rows, d.cols))
    keep = [i for i, x in enumerate(diag) if x != 1]
    uinv = inverse_unimodular(u) if ngens else u
    return FGAbelianGroup(
        ngens=ngens,
        relations=relations,
        invariants=tuple(diag[i] for i in keep),
        transform=u.select_rows(keep),
        _back=uinv.select_cols(keep),
        _lattice=Lattice(relations),
    )


def cyclic(n: int) -> FGAbelianGroup:
    """Z/n (n = 0 gives Z)."""
    return group_from_relations(1, IntMatrix(1, 1, [[n]]))


def free(n: int) -> FGAbelianGroup:
    return group_from_relations(n)


def trivial() -> FGAbelianGroup:
    return group_from_relations(0)


def from_invariants(invs: Sequence[int]) -> FGAbelianGroup:
    return group_from_relations(len(invs), IntMatrix.diagonal(list(invs)))


def direct_sum(*groups: FGAbelianGroup) -> FGAbelianGroup:
    n = sum(g.ngens for g in groups)
    cols = []
    off = 0
    for g in groups:
        for c in g.relations.columns():
            cols.append([0] * off + list(c) + [0] * (n - off - g.ngens))
        off += g.ngens
    return group_from_relations(n, IntMatrix.from_columns(cols, n))


def isomorphic(a: FGAbelianGroup, b: FGAbelianGroup) -> bool:
    return a.invariants == b.invariants


class HomError(ValueError):
    """Raised when a proposed matrix does not define a homomorphism."""


@dataclass(frozen=True, eq=False)
class GroupHom:
    """Homomorphism given on generator coordinates (target.ngens x source.ngens).

    Well-definedness is checked on construction: every source relator must
    land in the target relation lattice.
    """

    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise HomError(f"matrix shape {self.matrix.shape} does not match "
                           f"{self.target.ngens}x{self.source.ngens}")
        for j, rel in enumerate(self.source.relations.columns()):
            if not self.target.is_zero(self.matrix.apply(rel)):
                raise HomError(f"source relator {j} = {list(rel)} does not map to zero")

    @classmethod
    def from_images(cls, source: FGAbelianGroup, target: FGAbelianGroup,
                    images: Sequence[Sequence[int]]) -> GroupHom:
        return cls(source, target, IntMatrix.from_columns(images, target.ngens))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(x)

    def compose(self, inner: GroupHom) -> GroupHom:
        """``self o inner``."""
        return GroupHom(inner.source, self.target, self.matrix @ inner.matrix)

    def __sub__(self, other: GroupHom) -> GroupHom:
        return GroupHom(self.source, self.target, self.matrix - other.matrix)

    def preimage(self, y: Sequence[int]) -> tuple[int, ...] | None:
        """Some ``x`` with ``self(x) = y`` in the target, or None."""
        n = self.source.ngens
        c = Lattice(self.matrix.hstack(self.target.relations)).solve(list(y))
        return None if c is None else tuple(c[:n])

    def is_zero(self) -> bool:
        return all(self.target.is_zero(self.matrix.col(j)) for j in range(self.source.ngens))

    def equals(self, other: GroupHom) -> bool:
        return (self - other).is_zero()

    def kernel(self) -> tuple[FGAbelianGroup, GroupHom]:
        return hom_kernel(self)

    def image(self) -> tuple[FGAbelianGroup, GroupHom]:
        return subgroup(self.target, self.matrix)

    def cokernel(self) -> FGAbelianGroup:
        return group_from_relations(self.target.ngens, self.target.relations.hstack(self.matrix))

    def is_injective(self) -> bool:
        return self.kernel()[0].is_trivial

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def identity_hom(g: FGAbelianGroup) -> GroupHom:
    return GroupHom(g, g, IntMatrix.identity(g.ngens))


def zero_hom(a: FGAbelianGroup, b: FGAbelianGroup) -> GroupHom:
    return GroupHom(a, b, IntMatrix.zero(b.ngens, a.ngens))


def scalar_hom(g: FGAbelianGroup, k: int) -> GroupHom:
    return GroupHom(g, g, IntMatrix.identity(g.ngens).scale(k))


def block_hom(source: FGAbelianGroup, target: FGAbelianGroup,
              blocks: Sequence[Sequence[IntMatrix]]) -> GroupHom:
    """Assemble a hom between direct sums from a grid of blocks (rows = target summands)."""
    rows = []
    for brow in blocks:
        h = brow[0].rows
        for i in range(h):
            r = []
            for b in brow:
                r.extend(b.row(i))
            rows.append(r)
    return GroupHom(source, target, IntMatrix(target.ngens, source.ngens, rows))


def subgroup(g: FGAbelianGroup, gens: IntMatrix) -> tuple[FGAbelianGroup, GroupHom]:
    """Subgroup of ``g`` generated by the columns of ``gens``, with its inclusion."""
    if gens.rows != g.ngens:
        raise ValueError("generator vectors have the wrong length")
    gens = lattice_basis(gens.hstack(g.relations))
    # drop generators that are already zero in g
    gens = IntMatrix.from_columns([c for c in gens.columns() if not g.is_zero(c)], g.ngens)
    k = gens.cols
    ns = nullspace(gens.hstack(g.relations))
    rels = ns.select_rows(range(k))
    sub = group_from_relations(k, rels)
    return sub, GroupHom(sub, g, gens)


def hom_kernel(h: GroupHom) -> tuple[FGAbelianGroup, GroupHom]:
    """Kernel of ``h`` as a presented group together with its inclusion into the source."""
    n = h.source.ngens
    ns = nullspace(h.matrix.hstack(h.target.relations))
    k = ns.select_rows(range(n))
    sub, inc = subgroup(h.source, k)
    for c in inc.matrix.columns():
        assert h.target.is_zero(h(c))
    return sub, inc


@dataclass
class ExactnessReport:
    exact: bool
    node: int | None = None
    kind: str | None = None
    witness: list[int] | None = None

    def to_json(self) -> dict:
        return {"exact": self.exact, "node": self.node, "kind": self.kind, "witness": self.witness}


class NotComposableError(ValueError):
    pass


def is_exact(seq: Sequence[GroupHom]) -> ExactnessReport:
    """Check image = kernel at every interior node of ``h0, h1, ...``.

    Node ``i`` is the target of ``seq[i]``.  On failure the witness is either a
    source generator whose composite is nonzero (kind ``"composite"``) or a
    kernel element outside the image (kind ``"kernel"``).
    """
    for i in range(len(seq) - 1):
        if not seq[i].target.same_presentation(seq[i + 1].source):
            raise NotComposableError(f"map {i} does not compose with map {i + 1}")
    for i in range(len(seq) - 1):
        f, g = seq[i], seq[i + 1]
        comp = g.matrix @ f.matrix
        for j in range(f.source.ngens):
            if not g.target.is_zero(comp.col(j)):
                return ExactnessReport(False, i, "composite", list(f.source.gen(j)))
        img = Lattice(f.matrix.hstack(f.target.relations))
        _, inc = hom_kernel(g)
        for c in inc.matrix.columns():
            if c not in img:
                return ExactnessReport(False, i, "kernel", list(c))
    return ExactnessReport(True)


def snf_presentation(g: FGAbelianGroup) -> tuple[FGAbelianGroup, GroupHom, GroupHom]:
    """``(G', to, back)`` with ``G'`` the diagonal presentation and mutually inverse isos."""
    gp = from_invariants(g.invariants)
    return gp, GroupHom(g, gp, g.transform), GroupHom(gp, g, g._back)


def conjugate_to_snf(seq: Sequence[GroupHom]) -> list[GroupHom]:
    """Rewrite every map of a sequence in the SNF coordinates of its groups."""
    pres = {}

    def p(g):
        if id(g) not in pres:
            pres[id(g)] = snf_presentation(g)
        return pres[id(g)]

    out = []
    for h in seq:
        _, _, back = p(h.source)
        tgt, to, _ = p(h.target)
        out.append(to.compose(h.compose(back)))
    return out
