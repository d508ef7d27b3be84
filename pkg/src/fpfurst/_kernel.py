"""Projection-kernel selector: compiled extension when built, else pure Python.

The compiled kernel packs coset representatives into int64 keys, which is only
safe while p**n fits well inside 64 bits; oversized calls are routed to the
pure kernel transparently.
"""

from __future__ import annotations

from array import array

from . import _pykernel

try:
    from . import _ckernel  # compiled extension, built via setup.py
except ImportError:  # pragma: no cover - depends on build environment
    _ckernel = None

BACKEND = _ckernel.BACKEND if _ckernel is not None else _pykernel.BACKEND

_KEY_LIMIT = 1 << 62


def backend_name() -> str:
    return BACKEND


def have_compiled() -> bool:
    return _ckernel is not None


def pack(values) -> array:
    """Pack an int sequence for the kernels ('q' = int64)."""
    return array("q", values)


def project_count_flat(pts, npts: int, n: int, basis, kdim: int, pivots, p: int) -> int:
    if _ckernel is not None and p**n < _KEY_LIMIT:
        return _ckernel.project_count_flat(pts, npts, n, basis, kdim, pivots, p)
    return _pykernel.project_count_flat(pts, npts, n, basis, kdim, pivots, p)
