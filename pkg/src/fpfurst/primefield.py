"""Arithmetic over F_p and the row-reduction primitives everything sits on.

Scalars are stored as plain machine-word residues in [0, p); the prime modulus
is verified eagerly by trial division, because a composite modulus silently
breaks the whole theory (F_{p^2} admits cheap counterexamples).  Counting is
done elsewhere in arbitrary-precision integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    """Trial division; intended for desk-scale p < 10**6."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


class PrimeField:
    """The field F_p.  Elements are ints in [0, p)."""

    def __init__(self, p: int):
        self.p = check_prime(p)

    def element(self, x: int) -> int:
        return x % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, -1, self.p)

    def __repr__(self):
        return f"PrimeField({self.p})"


@dataclass(frozen=True)
class PrimeMatrix:
    """Immutable row-major matrix over F_p."""

    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        if any(not (0 <= e < self.p) for e in self.entries):
            raise ValueError("entries must be residues in [0, p)")

    @classmethod
    def from_rows(cls, rows, p: int) -> "PrimeMatrix":
        rows = [tuple(int(e) % p for e in row) for row in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        flat = tuple(e for row in rows for e in row)
        return cls(p, len(rows), ncols, flat)

    @classmethod
    def zero(cls, rows: int, cols: int, p: int) -> "PrimeMatrix":
        return cls(p, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int, p: int) -> "PrimeMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], p)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]


def rref(m: PrimeMatrix) -> tuple[PrimeMatrix, tuple[int, ...]]:
    """Unique reduced row echelon form of m and its pivot columns.

    Row space is preserved; two matrices have equal row space iff their RREFs
    coincide, which is what makes RREF bases canonical subspace names.
    """
    p = m.p
    work = m.to_rows()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if work[i][c] % p != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = pow(work[r][c], -1, p)
        work[r] = [(e * inv) % p for e in work[r]]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                row_r = work[r]
                work[i] = [(e - f * rr) % p for e, rr in zip(work[i], row_r)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return PrimeMatrix.from_rows(work, p), tuple(pivots)


def rank(m: PrimeMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: PrimeMatrix) -> PrimeMatrix:
    """RREF basis of the right null space; rank-nullity gives its row count."""
    reduced, pivots = rref(m)
    p, n = m.p, m.cols
    free = [c for c in range(n) if c not in pivots]
    vectors = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-reduced[i, f]) % p
        vectors.append(v)
    if not vectors:
        return PrimeMatrix(p, 0, n, ())
    basis, _ = rref(PrimeMatrix.from_rows(vectors, p))
    return basis


def matvec(m: PrimeMatrix, v) -> tuple[int, ...]:
    p = m.p
    return tuple(
        sum(m[i, j] * v[j] for j in range(m.cols)) % p for i in range(m.rows)
    )


def stack(a: PrimeMatrix, b: PrimeMatrix) -> PrimeMatrix:
    if a.p != b.p or a.cols != b.cols:
        raise ValueError("incompatible stack")
    return PrimeMatrix(a.p, a.rows + b.rows, a.cols, a.entries + b.entries)
