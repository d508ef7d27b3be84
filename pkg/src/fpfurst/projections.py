"""Coset projections x -> x + V, image counting, and exceptional sets.

The projection of a point set A by a subspace V is the set of distinct cosets
of V meeting A, represented canonically (zero at V's pivot coordinates).  A
direction V in G(n-k, F_p^n) is s-exceptional for A when A meets strictly
fewer than p^s such cosets; the strictness follows the definition verbatim
and is decided exactly (count^den < p^num), never in floats.

A note on indexing: the exceptional set for parameter k collects subspaces of
dimension n-k -- the k names the dimension of the projection target, not of V.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import _kernel
from .flags import LinearSubspace, enumerate_linear, reduce_mod_subspace
from .indices import as_fraction, compare_count_to_power
from .primefield import check_prime


@dataclass(frozen=True)
class PointSet:
    """Sorted, deduplicated finite subset of F_p^n with exact cardinality."""

    n: int
    p: int
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        check_prime(self.p)
        for q in self.points:
            if len(q) != self.n or any(not (0 <= c < self.p) for c in q):
                raise ValueError(f"bad point {q} for F_{self.p}^{self.n}")
        if any(self.points[i] >= self.points[i + 1] for i in range(len(self.points) - 1)):
            raise ValueError("points must be strictly sorted")

    @classmethod
    def from_iterable(cls, points, n: int, p: int) -> "PointSet":
        reduced = {tuple(c % p for c in q) for q in points}
        return cls(n, p, tuple(sorted(reduced)))

    @classmethod
    def full_space(cls, n: int, p: int) -> "PointSet":
        return cls(n, p, tuple(itertools.product(range(p), repeat=n)))

    @classmethod
    def lex_prefix(cls, n: int, p: int, count: int) -> "PointSet":
        """The first `count` points of F_p^n in lexicographic order."""
        if not 0 <= count <= p**n:
            raise ValueError(f"prefix size {count} out of range")
        pts = tuple(itertools.islice(itertools.product(range(p), repeat=n), count))
        return cls(n, p, pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, q):
        q = tuple(q)
        i = bisect.bisect_left(self.points, q)
        return i < len(self.points) and self.points[i] == q

    def flat(self):
        """Row-major packed coordinates for the projection kernel."""
        return _kernel.pack(c for q in self.points for c in q)


@dataclass(frozen=True)
class ExceptionalQuery:
    """The question "is #proj_V(A) < p^s", for V of dimension n - k."""

    s: Fraction
    k: int

    def __post_init__(self):
        object.__setattr__(self, "s", as_fraction(self.s))
        if self.s <= 0:
            raise ValueError("s must be positive")


def coset_representative(x, V: LinearSubspace) -> tuple[int, ...]:
    """Canonical name of the coset x + V; equal outputs iff same coset."""
    return reduce_mod_subspace(x, V)


def project_set(A: PointSet, V: LinearSubspace) -> PointSet:
    """The distinct cosets of V meeting A, as canonical representatives."""
    _check_compatible(A, V)
    return PointSet.from_iterable(
        (coset_representative(q, V) for q in A.points), A.n, A.p
    )


def projection_count(A: PointSet, V: LinearSubspace) -> int:
    """#proj_V(A) through the compiled/pure kernel."""
    _check_compatible(A, V)
    return _kernel.project_count_flat(
        A.flat(),
        len(A),
        A.n,
        _kernel.pack(V.basis.entries),
        V.k,
        _kernel.pack(V.pivots),
        A.p,
    )


def coset_slice_counts(A: PointSet, V: LinearSubspace) -> dict[tuple[int, ...], int]:
    """How many points of A fall in each coset of V; values sum to #A."""
    _check_compatible(A, V)
    counts: dict[tuple[int, ...], int] = {}
    for q in A.points:
        rep = coset_representative(q, V)
        counts[rep] = counts.get(rep, 0) + 1
    return counts


def exceptional_set(A: PointSet, q: ExceptionalQuery) -> list[LinearSubspace]:
    """All V in G(n-k, F_p^n) with #proj_V(A) strictly below p^s.

    Returned as an explicit list, in enumeration order, so constructions can
    assert containment of specific witnesses.
    """
    if not 0 < q.k < A.n:
        raise ValueError(f"need 0 < k < n, got k={q.k}, n={A.n}")
    flat = A.flat()
    npts = len(A)
    out = []
    for V in enumerate_linear(A.n, A.n - q.k, A.p):
        cnt = _kernel.project_count_flat(
            flat, npts, A.n, _kernel.pack(V.basis.entries), V.k, _kernel.pack(V.pivots), A.p
        )
        if compare_count_to_power(cnt, A.p, q.s) < 0:
            out.append(V)
    return out


def count_small_projection_subspaces(W: LinearSubspace, k: int, l: int) -> int:
    """Brute-force count of V in G(n-k, F_p^n) with #proj_V(W) <= p^l.

    Hypotheses (n - k >= m - l, l <= k, l <= m for m = dim W) mirror the
    counting estimate this is checked against; the count itself is obtained
    by enumerating every V and projecting W's full point list.
    """
    n, p, m = W.n, W.p, W.k
    if not (1 <= k <= n and n - k >= m - l and 0 <= l <= k and l <= m):
        raise ValueError(f"hypotheses violated for (n={n}, k={k}, m={m}, l={l})")
    pts = W.points()
    flat = _kernel.pack(c for q in pts for c in q)
    npts = len(pts)
    threshold = p**l
    total = 0
    for V in enumerate_linear(n, n - k, p):
        cnt = _kernel.project_count_flat(
            flat, npts, n, _kernel.pack(V.basis.entries), V.k, _kernel.pack(V.pivots), p
        )
        if cnt <= threshold:
            total += 1
    return total


def _check_compatible(A: PointSet, V: LinearSubspace):
    if A.n != V.n or A.p != V.p:
        raise ValueError("point set and subspace live in different spaces")
