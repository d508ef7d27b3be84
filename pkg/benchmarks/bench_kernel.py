#!/usr/bin/env python3
"""Benchmark the projection kernel: compiled extension vs pure Python.

Workloads mirror the hot paths of the test suite: counting coset images of a
full subspace against every direction of a Grassmannian, and the rectangle
witness against all 2-D directions.

Usage: python benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fpfurst import _kernel, _pykernel  # noqa: E402
from fpfurst.flags import LinearSubspace, enumerate_linear  # noqa: E402
from fpfurst.projections import PointSet  # noqa: E402


def _workloads():
    full = LinearSubspace.full(4, 5)
    pts = full.points()
    yield (
        "G(2, F_5^4) x 625-point block",
        _kernel.pack(c for q in pts for c in q),
        len(pts),
        4,
        [(V.basis.entries, V.k, V.pivots) for V in enumerate_linear(4, 2, 5)],
        5,
    )
    rect = PointSet.from_iterable(
        ((x % 101, y % 101) for x in range(-2, 3) for y in range(-20, 21)), 2, 101
    )
    yield (
        "G(1, F_101^2) x 205-point rectangle",
        rect.flat(),
        len(rect),
        2,
        [(V.basis.entries, V.k, V.pivots) for V in enumerate_linear(2, 1, 101)],
        101,
    )


def _time(fn, flat, npts, n, dirs, p, repeat):
    packed = [(_kernel.pack(b), k, _kernel.pack(piv)) for b, k, piv in dirs]
    best = float("inf")
    total = 0
    for _ in range(repeat):
        start = time.perf_counter()
        total = sum(fn(flat, npts, n, b, k, piv, p) for b, k, piv in packed)
        best = min(best, time.perf_counter() - start)
    return best, total


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    print(f"backend selected at import: {_kernel.backend_name()}")
    for label, flat, npts, n, dirs, p in _workloads():
        py_t, py_total = _time(
            _pykernel.project_count_flat, flat, npts, n, dirs, p, args.repeat
        )
        line = f"{label}: python {py_t * 1e3:8.1f} ms"
        if _kernel.have_compiled():
            c_t, c_total = _time(
                _kernel._ckernel.project_count_flat, flat, npts, n, dirs, p, args.repeat
            )
            assert c_total == py_total, "backends disagree!"
            line += f" | compiled {c_t * 1e3:8.1f} ms | speedup x{py_t / c_t:.1f}"
        else:
            line += " | compiled kernel not built (python setup.py build_ext --inplace)"
        print(line)


if __name__ == "__main__":
    main()
