# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled projection kernel: reduce points by an RREF basis mod p and count
distinct coset representatives.  Mirrors fpfurst._pykernel exactly.

Representatives are packed into int64 mixed-radix keys, so the caller must
guarantee p**n < 2**62 (the selector in fpfurst._kernel does).
"""

from libc.stdlib cimport malloc, free, qsort

BACKEND = "compiled"


cdef int _cmp_i64(const void* a, const void* b) noexcept nogil:
    cdef long long x = (<const long long*> a)[0]
    cdef long long y = (<const long long*> b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


def project_count_flat(long long[::1] pts, Py_ssize_t npts, int n,
                       long long[::1] basis, int kdim,
                       long long[::1] pivots, long long p):
    """Number of distinct cosets x + V met by the packed point block."""
    if npts == 0:
        return 0
    cdef long long* keys = <long long*> malloc(npts * sizeof(long long))
    cdef long long* buf = <long long*> malloc(n * sizeof(long long))
    if keys == NULL or buf == NULL:
        if keys != NULL:
            free(keys)
        if buf != NULL:
            free(buf)
        raise MemoryError()
    cdef Py_ssize_t idx, base
    cdef int i, j
    cdef long long c, v, key
    cdef Py_ssize_t distinct = 0
    with nogil:
        for idx in range(npts):
            base = idx * n
            for j in range(n):
                buf[j] = pts[base + j]
            for i in range(kdim):
                c = buf[pivots[i]]
                if c != 0:
                    for j in range(n):
                        v = (buf[j] - c * basis[i * n + j]) % p
                        if v < 0:
                            v += p
                        buf[j] = v
            key = 0
            for j in range(n):
                key = key * p + buf[j]
            keys[idx] = key
        qsort(keys, npts, sizeof(long long), _cmp_i64)
        distinct = 1
        for idx in range(1, npts):
            if keys[idx] != keys[idx - 1]:
                distinct += 1
    free(buf)
    free(keys)
    return distinct
