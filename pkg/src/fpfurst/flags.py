"""Canonical subspaces and affine flats of F_p^n: representation, enumeration,
counting, and relation predicates.

Canonical forms make equality structural: a linear subspace is named by its
RREF basis, an affine flat by (direction, base) where the base is the unique
coset representative vanishing on the direction's pivot coordinates.  The
streams produced here are deterministic -- lexicographic in (pivot pattern,
free entries) -- so "the first N flats" is a reproducible choice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .primefield import PrimeMatrix, check_prime, rref, stack


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Exact number of k-dimensional subspaces of F_p^n (q-binomial at q=p)."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    check_prime(p)
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (k - i) - 1
    assert num % den == 0
    return num // den


@dataclass(frozen=True)
class LinearSubspace:
    """A k-dimensional linear subspace of F_p^n, named by its RREF basis."""

    n: int
    k: int
    p: int
    basis: PrimeMatrix
    pivots: tuple[int, ...]

    def __post_init__(self):
        if self.basis.rows != self.k or self.basis.cols != self.n:
            raise ValueError("basis shape mismatch")
        if len(self.pivots) != self.k:
            raise ValueError("pivot count mismatch")

    @classmethod
    def from_rows(cls, rows, n: int, p: int) -> "LinearSubspace":
        """Span of the given row vectors, in canonical form."""
        mat = PrimeMatrix.from_rows([list(r) for r in rows], p) if rows else PrimeMatrix(p, 0, n, ())
        if mat.rows and mat.cols != n:
            raise ValueError("row length mismatch")
        reduced, pivots = rref(mat)
        k = len(pivots)
        trimmed = PrimeMatrix(p, k, n, reduced.entries[: k * n])
        return cls(n, k, p, trimmed, pivots)

    @classmethod
    def zero(cls, n: int, p: int) -> "LinearSubspace":
        return cls(n, 0, p, PrimeMatrix(p, 0, n, ()), ())

    @classmethod
    def full(cls, n: int, p: int) -> "LinearSubspace":
        return cls(n, n, p, PrimeMatrix.identity(n, p), tuple(range(n)))

    @classmethod
    def coordinate(cls, coords, n: int, p: int) -> "LinearSubspace":
        """Span of the given coordinate axes."""
        rows = []
        for c in sorted(coords):
            row = [0] * n
            row[c] = 1
            rows.append(row)
        return cls.from_rows(rows, n, p)

    def contains_vector(self, v) -> bool:
        """Membership test by reducing v against the RREF basis."""
        p = self.p
        w = [e % p for e in v]
        for row, c in zip(self.basis.to_rows(), self.pivots):
            f = w[c]
            if f:
                w = [(a - f * b) % p for a, b in zip(w, row)]
        return not any(w)

    def contains_subspace(self, other: "LinearSubspace") -> bool:
        return all(self.contains_vector(r) for r in other.basis.to_rows())

    def points(self) -> list[tuple[int, ...]]:
        """All p^k points, in lexicographic order of the coefficient vector."""
        p, n = self.p, self.n
        rows = self.basis.to_rows()
        pts = []
        for coeffs in itertools.product(range(p), repeat=self.k):
            v = [0] * n
            for c, row in zip(coeffs, rows):
                if c:
                    for j in range(n):
                        v[j] = (v[j] + c * row[j]) % p
            pts.append(tuple(v))
        return pts


@dataclass(frozen=True)
class AffineFlat:
    """A coset base + direction, base vanishing on the direction's pivots."""

    direction: LinearSubspace
    base: tuple[int, ...]

    def __post_init__(self):
        if len(self.base) != self.direction.n:
            raise ValueError("base length mismatch")
        if any(self.base[c] for c in self.direction.pivots):
            raise ValueError("base must vanish on pivot coordinates")

    @property
    def n(self) -> int:
        return self.direction.n

    @property
    def k(self) -> int:
        return self.direction.k

    @property
    def p(self) -> int:
        return self.direction.p

    @classmethod
    def through(cls, point, direction: LinearSubspace) -> "AffineFlat":
        """The flat point + direction, canonicalized."""
        return cls(direction, reduce_mod_subspace(point, direction))

    def contains_point(self, x) -> bool:
        return reduce_mod_subspace(x, self.direction) == self.base

    def points(self) -> list[tuple[int, ...]]:
        base = self.base
        p, n = self.p, self.n
        return [
            tuple((a + b) % p for a, b in zip(base, q))
            for q in self.direction.points()
        ]


def reduce_mod_subspace(x, V: LinearSubspace) -> tuple[int, ...]:
    """Canonical representative of x + V: zero at V's pivot coordinates."""
    p = V.p
    w = [e % p for e in x]
    for row, c in zip(V.basis.to_rows(), V.pivots):
        f = w[c]
        if f:
            w = [(a - f * b) % p for a, b in zip(w, row)]
    return tuple(w)


def enumerate_linear(n: int, k: int, p: int):
    """Yield every k-subspace of F_p^n exactly once.

    Order: lexicographic in (pivot-column pattern, free-entry vector); the
    free entries of the RREF basis are filled row-major.  Total count is
    gaussian_binomial(n, k, p).
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    check_prime(p)
    if k == 0:
        yield LinearSubspace.zero(n, p)
        return
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free_positions = [
            (i, j)
            for i in range(k)
            for j in range(pivots[i] + 1, n)
            if j not in pivot_set
        ]
        template = [[0] * n for _ in range(k)]
        for i, c in enumerate(pivots):
            template[i][c] = 1
        for values in itertools.product(range(p), repeat=len(free_positions)):
            rows = [row[:] for row in template]
            for (i, j), v in zip(free_positions, values):
                rows[i][j] = v
            flat = tuple(e for row in rows for e in row)
            basis = PrimeMatrix(p, k, n, flat)
            yield LinearSubspace(n, k, p, basis, pivots)


def enumerate_affine(n: int, k: int, p: int):
    """Yield every affine k-flat once: directions in enumerate_linear order,
    then canonical bases in lexicographic order of the free coordinates."""
    for direction in enumerate_linear(n, k, p):
        free_cols = [c for c in range(n) if c not in direction.pivots]
        for values in itertools.product(range(p), repeat=len(free_cols)):
            base = [0] * n
            for c, v in zip(free_cols, values):
                base[c] = v
            yield AffineFlat(direction, tuple(base))


@dataclass(frozen=True)
class FlatRelation:
    """How two flats meet: exact affine intersection dimension (None when
    disjoint), parallelism, transversality."""

    intersection_dim: int | None
    parallel: bool
    transverse: bool


def relate(V: AffineFlat, W: AffineFlat) -> FlatRelation:
    """Exact incidence record for two flats of the same ambient space.

    transverse iff the intersection is nonempty of the generic dimension
    dim V + dim W - n; parallel iff the smaller direction is contained in
    the larger.
    """
    if V.n != W.n or V.p != W.p:
        raise ValueError("flats live in different spaces")
    n, p = V.n, V.p
    stacked = stack(V.direction.basis, W.direction.basis)
    joined, pivots = rref(stacked)
    r = len(pivots)

    small, big = (V, W) if V.k <= W.k else (W, V)
    parallel = big.direction.contains_subspace(small.direction)

    diff = [(a - b) % p for a, b in zip(W.base, V.base)]
    span_rows = [list(joined.row(i)) for i in range(r)] + [diff]
    nonempty = len(rref(PrimeMatrix.from_rows(span_rows, p))[1]) == r

    if not nonempty:
        return FlatRelation(None, parallel, False)
    inter_dim = V.k + W.k - r
    transverse = inter_dim == V.k + W.k - n
    return FlatRelation(inter_dim, parallel, transverse)
