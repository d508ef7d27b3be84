"""Witnesses showing the exceptional-set exponent is attained, certified by
full enumeration.

Each constructor returns the set A, the specific directions the recipe claims
are exceptional, and a certified count obtained by enumerating every direction
in G(n-k, F_p^n) and testing "#proj_V(A) < p^s" exactly.  No claim is taken on
faith: every claimed direction is individually re-verified, and a construction
whose claims fail (possible only below its degeneracy scale) raises instead of
returning an unsound witness.

Branches, by type of (a, s):
  type 1  -- any set of ceil(p^a) points; every direction is claimed.
  type 2, gamma <= (beta+1)/2 -- A = F_p^m x I; claims are the directions
            collapsing the coordinate m-subspace to <= p^l cosets.
  type 2, gamma > (beta+1)/2  -- rectangle construction with a = (m-1)+(beta+1).
  type 3, gamma > beta/2      -- A = R x F_p^m for a symmetric rectangle R in
            F_p^2; claims are the disjointified families U_theta over the
            2-D exceptional directions theta of R.
  type 3, gamma <= beta/2     -- enlarge a to m+1, reuse the type-2 recipe,
            then pass to a lex-prefix subset of the right size.
  type 4  -- claims empty; certification shows the exceptional set IS empty.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateScaleError
from .flags import LinearSubspace, enumerate_linear
from .indices import (
    NEG_INF,
    as_fraction,
    ceil_rational_power,
    compare_to_scaled_power,
    floor_scaled_power,
    marstrand_index,
    marstrand_params,
)
from .primefield import check_prime
from .projections import ExceptionalQuery, PointSet, exceptional_set, projection_count

FIFTH = Fraction(1, 5)


@dataclass(frozen=True)
class ExceptionalWitness:
    """A set A plus claimed exceptional directions and the enumerated truth."""

    a: Fraction
    s: Fraction
    n: int
    k: int
    p: int
    mtype: int
    branch: str
    set_a: PointSet
    claimed: tuple[LinearSubspace, ...]
    certified_count: int


def _sym_range(bound: int, p: int) -> list[int]:
    """Residues of -bound..bound; symmetric representatives, as the slope
    arithmetic of the rectangle recipe needs."""
    if 2 * bound + 1 > p:
        raise DegenerateScaleError(f"symmetric range +-{bound} does not embed in F_{p}")
    return sorted({v % p for v in range(-bound, bound + 1)})


def _rectangle(a, s, p: int) -> PointSet:
    """Lattice points with |x| <= (1/5)p^(a-s), |y| <= (1/5)p^s (may be a
    single point at tiny p; the caller decides whether that is acceptable)."""
    xs = _sym_range(floor_scaled_power(FIFTH, p, a - s), p)
    ys = _sym_range(floor_scaled_power(FIFTH, p, s), p)
    return PointSet.from_iterable(itertools.product(xs, ys), 2, p)


def _slope_line(kappa: int, p: int) -> LinearSubspace:
    return LinearSubspace.from_rows([[1, kappa % p]], 2, p)


def construct_oberlin_rectangle(a, s, p: int) -> ExceptionalWitness:
    """The rectangle witness in F_p^2: A is the (1/5)p^(a-s) x (1/5)p^s box of
    symmetric lattice points, and the claimed exceptional directions are the
    lines through the origin of slope kappa with |kappa| <= (1/5)p^(2s-a)."""
    a, s = as_fraction(a), as_fraction(s)
    check_prime(p)
    if not (0 < a <= 2 and a / 2 < s <= min(Fraction(1), a)):
        raise ValueError(f"need a in (0,2] and s in (a/2, min(1,a)], got ({a},{s})")
    if floor_scaled_power(FIFTH, p, s) < 1:
        raise DegenerateScaleError(f"row range floor(p^s / 5) is empty at p = {p}")
    set_a = _rectangle(a, s, p)
    slope_bound = floor_scaled_power(FIFTH, p, 2 * s - a)
    claimed = tuple(_slope_line(kappa, p) for kappa in range(-slope_bound, slope_bound + 1))
    claimed = tuple(sorted(set(claimed), key=lambda V: V.basis.entries))
    return _certify(a, s, 2, 1, p, "oberlin-rectangle", set_a, claimed)


def construct_marstrand_witness(a, s, n: int, k: int, p: int) -> ExceptionalWitness:
    """Dispatch on the type of (a, s) and build the matching witness."""
    pr = marstrand_params(a, s, n, k)
    a, s = pr.a, pr.s
    if pr.mtype == 1:
        set_a = PointSet.lex_prefix(n, p, ceil_rational_power(p, a))
        claimed = tuple(enumerate_linear(n, n - k, p))
        return _certify(a, s, n, k, p, "type1-any", set_a, claimed)
    if pr.mtype == 4:
        set_a = PointSet.lex_prefix(n, p, ceil_rational_power(p, a))
        return _certify(a, s, n, k, p, "type4-empty", set_a, ())
    if pr.mtype == 2:
        if pr.gamma <= (pr.beta + 1) / 2:
            set_a, claimed = _slab_witness(n, k, p, pr.m, ceil_rational_power(p, pr.beta), pr.l)
            return _certify(a, s, n, k, p, "type2-slab", set_a, claimed)
        set_a, claimed = _rectangle_product_witness(
            n, k, p, pr.m - 1, pr.beta + 1, pr.gamma, pr.l
        )
        return _certify(a, s, n, k, p, "type2-rectangle", set_a, claimed)
    # type 3
    if pr.gamma > pr.beta / 2:
        set_a, claimed = _rectangle_product_witness(n, k, p, pr.m, pr.beta, pr.gamma, pr.l)
        return _certify(a, s, n, k, p, "type3-rectangle", set_a, claimed)
    full, claimed = _slab_witness(n, k, p, pr.m + 1, 1, pr.l)
    subset = PointSet(n, p, full.points[: ceil_rational_power(p, a)])
    return _certify(a, s, n, k, p, "type3-enlarged", subset, claimed)


def _slab_witness(n, k, p, m, isize, l):
    """A = F_p^m x I x 0^(n-m-1) with #I = isize; claimed directions are those
    V with #proj_V of the coordinate m-subspace at most p^l."""
    if not 0 <= m <= n - 1:
        raise DegenerateScaleError(f"slab needs 0 <= m <= n-1, got m = {m}")
    if isize > p:
        raise DegenerateScaleError(f"interval of {isize} points does not fit in F_{p}")
    core = LinearSubspace.coordinate(range(m), n, p)
    pts = [
        q + (i,) + (0,) * (n - m - 1)
        for q in itertools.product(range(p), repeat=m)
        for i in range(isize)
    ]
    set_a = PointSet.from_iterable(pts, n, p)
    core_pts = PointSet.from_iterable(core.points(), n, p)
    threshold = p**l
    claimed = tuple(
        V
        for V in enumerate_linear(n, n - k, p)
        if projection_count(core_pts, V) <= threshold
    )
    return set_a, claimed


def _rectangle_product_witness(n, k, p, m, beta_eff, gamma, l):
    """A = R x F_p^m x 0^(n-m-2) for the symmetric rectangle R with side
    exponents (beta_eff - gamma, gamma); claims are the union of the
    disjointified direction families over R's own 2-D exceptional set."""
    if not 0 <= m <= n - 2:
        raise DegenerateScaleError(f"rectangle product needs m <= n-2, got m = {m}")
    rect = _rectangle(beta_eff, gamma, p)
    pts = [
        (q[0], q[1]) + z + (0,) * (n - m - 2)
        for q in rect.points
        for z in itertools.product(range(p), repeat=m)
    ]
    set_a = PointSet.from_iterable(pts, n, p)
    families = _theta_families(rect, gamma, n, k, p, m, l)
    claimed_keys = set()
    claimed = []
    for vs in families.values():
        for V in vs:
            if V.basis.entries not in claimed_keys:
                claimed_keys.add(V.basis.entries)
                claimed.append(V)
    claimed.sort(key=lambda V: (V.pivots, V.basis.entries))
    return set_a, tuple(claimed)


def _theta_families(rect: PointSet, gamma: Fraction, n, k, p, m, l):
    """For each 2-D direction theta that is gamma-exceptional for the
    rectangle, the family

        U_theta = {V : #proj_V(theta + F_p^m) <= p^l,
                       #proj_V(F_p^m) = p^l,
                       #proj_V(F_p^2 x F_p^m) = p^(l+1)}.

    Subtracting the two degenerate conditions makes the families pairwise
    disjoint across theta, which is what turns a union bound into a sum.
    """
    theta_list = exceptional_set(rect, ExceptionalQuery(gamma, 1))
    mid = LinearSubspace.coordinate(range(2, 2 + m), n, p)
    wide = LinearSubspace.coordinate(range(2 + m), n, p)
    mid_pts = PointSet.from_iterable(mid.points(), n, p)
    wide_pts = PointSet.from_iterable(wide.points(), n, p)
    out = {}
    directions = list(enumerate_linear(n, n - k, p))
    mid_ok = {
        V.basis.entries: projection_count(mid_pts, V) == p**l for V in directions
    }
    wide_ok = {
        V.basis.entries: projection_count(wide_pts, V) == p ** (l + 1)
        for V in directions
    }
    for theta in theta_list:
        lifted_rows = [list(r) + [0] * (n - 2) for r in theta.basis.to_rows()]
        span = LinearSubspace.from_rows(lifted_rows + mid.basis.to_rows(), n, p)
        span_pts = PointSet.from_iterable(span.points(), n, p)
        members = tuple(
            V
            for V in directions
            if projection_count(span_pts, V) <= p**l
            and mid_ok[V.basis.entries]
            and wide_ok[V.basis.entries]
        )
        out[theta] = members
    return out


def type3_direction_families(a, s, n: int, k: int, p: int):
    """The per-theta disjoint families used by the rectangle-product branches,
    exposed for the disjointness checks."""
    pr = marstrand_params(a, s, n, k)
    if pr.mtype == 3 and pr.gamma > pr.beta / 2:
        m, beta_eff = pr.m, pr.beta
    elif pr.mtype == 2 and pr.gamma > (pr.beta + 1) / 2:
        m, beta_eff = pr.m - 1, pr.beta + 1
    else:
        raise ValueError("no rectangle-product branch applies to these parameters")
    rect = _rectangle(beta_eff, pr.gamma, p)
    return _theta_families(rect, pr.gamma, n, k, p, m, pr.l)


def _certify(a, s, n, k, p, branch, set_a, claimed) -> ExceptionalWitness:
    exceptional = exceptional_set(set_a, ExceptionalQuery(s, k))
    keys = {V.basis.entries for V in exceptional}
    bad = [V for V in claimed if V.basis.entries not in keys]
    if bad:
        raise DegenerateScaleError(
            f"{branch}: {len(bad)} claimed directions fail the strict test at p = {p}"
        )
    return ExceptionalWitness(
        a, s, n, k, p, marstrand_params(a, s, n, k).mtype, branch,
        set_a, tuple(claimed), len(exceptional),
    )


def certify_lower_bound(w: ExceptionalWitness, c) -> bool:
    """certified_count >= c * p^M(a,s;n,k), exactly; vacuous at M = -inf."""
    target = marstrand_index(w.a, w.s, w.n, w.k)
    if target is NEG_INF:
        return True
    return compare_to_scaled_power(w.certified_count, as_fraction(c), w.p, target) >= 0


def witness_to_text(w: ExceptionalWitness) -> str:
    """Line-oriented exact serialization of a witness."""
    buf = io.StringIO()
    buf.write("fpfurst-witness 1\n")
    buf.write(
        f"p={w.p} n={w.n} k={w.k} a={w.a} s={w.s} type={w.mtype} branch={w.branch}\n"
    )
    buf.write("A " + " ".join(",".join(map(str, pt)) for pt in w.set_a.points) + "\n")
    buf.write(f"claimed={len(w.claimed)}\n")
    for V in w.claimed:
        buf.write("dir " + ";".join(",".join(map(str, r)) for r in V.basis.to_rows()) + "\n")
    buf.write(f"certified={w.certified_count}\n")
    return buf.getvalue()


def witness_from_text(text: str) -> ExceptionalWitness:
    lines = text.splitlines()
    if not lines or lines[0] != "fpfurst-witness 1":
        raise ValueError("not a witness serialization")
    header = dict(item.split("=", 1) for item in lines[1].split())
    p, n, k = int(header["p"]), int(header["n"]), int(header["k"])
    a, s = Fraction(header["a"]), Fraction(header["s"])
    pts = tuple(tuple(int(c) for c in chunk.split(",")) for chunk in lines[2].split()[1:])
    nclaims = int(lines[3].split("=")[1])
    claimed = []
    for i in range(nclaims):
        rows = [
            [int(c) for c in row.split(",")]
            for row in lines[4 + i].split(" ", 1)[1].split(";")
        ]
        claimed.append(LinearSubspace.from_rows(rows, n, p))
    certified = int(lines[4 + nclaims].split("=")[1])
    return ExceptionalWitness(
        a, s, n, k, p, int(header["type"]), header["branch"],
        PointSet(n, p, pts), tuple(claimed), certified,
    )
