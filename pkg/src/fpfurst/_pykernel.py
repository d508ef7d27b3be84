"""Pure-Python projection kernel: the fallback for fpfurst._ckernel.

Counts distinct canonical coset representatives of a packed point block under
reduction by an RREF subspace basis.  Same contract as the compiled kernel.
"""

from __future__ import annotations

BACKEND = "python"


def project_count_flat(pts, npts, n, basis, kdim, pivots, p):
    """Number of distinct cosets x + V met by the points.

    pts: row-major flat sequence of npts points of F_p^n (coords reduced);
    basis: row-major flat RREF basis of V (kdim rows); pivots: pivot columns.
    """
    if kdim == 0:
        return len({tuple(pts[b : b + n]) for b in range(0, npts * n, n)})
    seen = set()
    rng = range(n)
    for b in range(0, npts * n, n):
        buf = list(pts[b : b + n])
        for i in range(kdim):
            c = buf[pivots[i]]
            if c:
                off = i * n
                for j in rng:
                    buf[j] = (buf[j] - c * basis[off + j]) % p
        seen.add(tuple(buf))
    return len(seen)
