"""Extremal families of flats with small unions, and their certificates.

A family here is a set of k-flats of F_p^n, at least lambda * p^t of them,
each carrying at least lambda * p^s marked points of itself; the object of
interest is the union E of the marked points.  The constructions realize the
matching upper bounds for the index function: every "p^x many" in the recipes
becomes the integer ceil(p^x), every choice of flats is the lexicographically
first eligible ones from the canonical enumeration, so identical inputs give
byte-identical families.

The two-dimensional recipes (point pencil, trivial sum-bound family, the
Szemeredi-Trotter-style grid of lines, and the horizontal strip) seed the
general one: the seed is extruded by a full F_p^d factor, then by graph flats
over an F_p^M factor, and finally each flat is lifted to the k-flats through
it that are transverse to the ambient coordinate slice.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateScaleError
from .flags import (
    AffineFlat,
    LinearSubspace,
    enumerate_affine,
    enumerate_linear,
    gaussian_binomial,
    relate,
)
from .indices import (
    as_fraction,
    canonical_split,
    ceil_rational_power,
    ceil_scaled_power,
    compare_to_scaled_power,
    furstenberg_index,
    furstenberg_params,
    is_admissible,
)
from .primefield import PrimeMatrix, check_prime
from .projections import PointSet

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class FurstenbergFamily:
    """A constructed family: flats with their marked point sets and the union."""

    s: Fraction
    t: Fraction
    n: int
    k: int
    p: int
    lam: Fraction
    branch: str
    members: tuple[tuple[AffineFlat, PointSet], ...]
    union: PointSet


@dataclass(frozen=True)
class FamilyValidity:
    is_valid: bool
    failures: tuple[str, ...]


@dataclass(frozen=True)
class ConstructionReport:
    """Exact size bookkeeping for one constructed family."""

    family_id: str
    size: int
    exponent: Fraction
    scale: int
    ratio: Fraction
    valid: bool
    lower_ok: bool


def _family(s, t, n, k, p, branch, members, union=None) -> FurstenbergFamily:
    members = tuple(members)
    if union is None:
        union = PointSet.from_iterable(
            (pt for _, ys in members for pt in ys), n, p
        )
    return FurstenbergFamily(s, t, n, k, p, HALF, branch, members, union)


def _line_directions(p: int) -> list[LinearSubspace]:
    return list(enumerate_linear(2, 1, p))


def construct_2d(s, t, p: int) -> FurstenbergFamily:
    """A small (s, t)-family of lines in F_p^2 with lambda = 1/2.

    Branch selection: s = 0 uses pencils; t <= s the trivial sum-bound family;
    s <= t <= 2 - s the slope/intercept grid of lines clipped to a short
    x-range; t >= 2 - s every non-horizontal line clipped to the strip of the
    first ceil(p^s) rows.
    """
    s, t = as_fraction(s), as_fraction(t)
    check_prime(p)
    if not (0 <= s <= 1 and 0 <= t <= 2):
        raise ValueError(f"need 0 <= s <= 1 and 0 <= t <= 2, got ({s},{t})")
    if s == 0:
        return _pencil_family(t, p)
    if t <= s:
        return _trivial_family(s, t, p)
    if t <= 2 - s:
        return _st_grid_family(s, t, p)
    return _strip_family(s, t, p)


def _pencil_family(t: Fraction, p: int) -> FurstenbergFamily:
    origin = (0, 0)
    dirs = _line_directions(p)
    if t <= 1:
        need = ceil_rational_power(p, t)
        members = [
            (AffineFlat.through(origin, D), PointSet.from_iterable([origin], 2, p))
            for D in dirs[:need]
        ]
        return _family(Fraction(0), t, 2, 1, p, "2d-origin-pencil", members)
    count = ceil_rational_power(p, t - 1)
    if count > p:
        raise DegenerateScaleError(f"ceil(p^(t-1)) = {count} exceeds p = {p}")
    slanted = [D for D in dirs if D.basis.row(0) != (1, 0)][: p - 1]
    members = []
    for i in range(count):
        x = (i, 0)
        ys = PointSet.from_iterable([x], 2, p)
        for D in slanted:
            members.append((AffineFlat.through(x, D), ys))
    return _family(Fraction(0), t, 2, 1, p, "2d-axis-pencils", members)


def _trivial_family(s: Fraction, t: Fraction, p: int) -> FurstenbergFamily:
    nlines = ceil_rational_power(p, t)
    npts = ceil_rational_power(p, s)
    members = []
    for D in _line_directions(p)[:nlines]:
        flat = AffineFlat.through((0, 0), D)
        members.append((flat, PointSet.from_iterable(flat.points()[:npts], 2, p)))
    return _family(s, t, 2, 1, p, "2d-trivial", members)


def _st_grid_family(s: Fraction, t: Fraction, p: int) -> FurstenbergFamily:
    nslopes = ceil_rational_power(p, (t - s) / 2)
    nshifts = ceil_rational_power(p, (s + t) / 2)
    xspan = ceil_scaled_power(HALF, p, s)
    for name, val, cap in (
        ("slope count ceil(p^((t-s)/2))", nslopes, p - 1),
        ("intercept count ceil(p^((s+t)/2))", nshifts, p),
        ("x-range ceil(p^s / 2)", xspan, p),
    ):
        if val > cap:
            raise DegenerateScaleError(f"{name} = {val} exceeds {cap} at p = {p}")
    members = []
    for a in range(1, nslopes + 1):
        direction = LinearSubspace.from_rows([[1, a]], 2, p)
        for b in range(1, nshifts + 1):
            pts = sorted((x, (a * x + b) % p) for x in range(1, xspan + 1))
            members.append(
                (
                    AffineFlat.through((0, b), direction),
                    PointSet(2, p, tuple(pts)),
                )
            )
    return _family(s, t, 2, 1, p, "2d-st-grid", members)


def _strip_family(s: Fraction, t: Fraction, p: int) -> FurstenbergFamily:
    nrows = ceil_rational_power(p, s)
    rows = sorted({r % p for r in range(1, nrows + 1)})
    if len(rows) != nrows:
        raise DegenerateScaleError(f"strip rows collide: ceil(p^s) = {nrows} > p = {p}")
    shared = {(x, y): (x, y) for x in range(p) for y in rows}
    horizontal = (1, 0)
    members = []
    for line in enumerate_affine(2, 1, p):
        if line.direction.basis.row(0) == horizontal:
            continue
        pts = sorted(shared[q] for q in line.points() if q in shared)
        members.append((line, PointSet(2, p, tuple(pts))))
    union = PointSet(2, p, tuple(sorted(shared.values())))
    return _family(s, t, 2, 1, p, "2d-strip", members, union)


def construct_general(s, t, n: int, k: int, p: int) -> FurstenbergFamily:
    """A small (s, t)-family of k-flats in F_p^n with lambda = 1/2.

    Dispatch: s = 0 pencils through few points; small t reuses one point set
    on flats through a fixed coordinate subspace; otherwise the seeded
    extrusion construction (with the tau > 2 range reduced to tau = 0 and one
    more extrusion step).
    """
    s, t = as_fraction(s), as_fraction(t)
    check_prime(p)
    if not is_admissible(s, t, n, k):
        raise ValueError(f"({s},{t};{n},{k}) is not admissible")
    if (n, k) == (2, 1):
        return construct_2d(s, t, p)
    if s == 0:
        return _general_case_a(t, n, k, p)
    d, sigma = canonical_split(s)
    if t <= (k - d - 1) * (n - k):
        return _general_case_b(s, t, n, k, p, d)
    return _general_case_cd(s, t, n, k, p)


def _general_case_a(t: Fraction, n: int, k: int, p: int) -> FurstenbergFamily:
    origin = (0,) * n
    if t <= k * (n - k):
        need = ceil_rational_power(p, t)
        ys = PointSet.from_iterable([origin], n, p)
        members = [
            (AffineFlat.through(origin, U), ys)
            for U in itertools.islice(enumerate_linear(n, k, p), need)
        ]
        return _family(Fraction(0), t, n, k, p, "general-a-origin", members)
    count = ceil_rational_power(p, t - k * (n - k))
    base_space = LinearSubspace.coordinate(range(n - k), n, p)
    transverse_dirs = [
        U for U in enumerate_linear(n, k, p) if _meets_trivially(U, base_space)
    ]
    assert len(transverse_dirs) == p ** (k * (n - k))
    points = [q + (0,) * k for q in itertools.product(range(p), repeat=n - k)][:count]
    members = []
    for x in points:
        ys = PointSet.from_iterable([x], n, p)
        for U in transverse_dirs:
            members.append((AffineFlat.through(x, U), ys))
    return _family(Fraction(0), t, n, k, p, "general-a-transverse", members)


def _meets_trivially(U: LinearSubspace, W: LinearSubspace) -> bool:
    from .primefield import rref, stack

    return len(rref(stack(U.basis, W.basis))[1]) == U.k + W.k


def _general_case_b(s, t, n, k, p, d) -> FurstenbergFamily:
    core = LinearSubspace.coordinate(range(d + 1), n, p)
    need = ceil_rational_power(p, t)
    hosts = list(
        itertools.islice(
            (U for U in enumerate_linear(n, k, p) if U.contains_subspace(core)),
            need,
        )
    )
    assert len(hosts) == need
    ys = PointSet.from_iterable(core.points()[: ceil_rational_power(p, s)], n, p)
    origin = (0,) * n
    members = [(AffineFlat.through(origin, U), ys) for U in hosts]
    return _family(s, t, n, k, p, "general-b-shared", members, ys)


def _general_case_cd(s, t, n, k, p) -> FurstenbergFamily:
    pr = furstenberg_params(s, t, n, k)
    d, sigma = pr.d, pr.sigma
    if pr.case == "c":
        seed_tau, depth = pr.tau, pr.m
    else:
        seed_tau, depth = Fraction(0), pr.m + 1

    if seed_tau == 0:
        # one fully generic line suffices; it lives in a single coordinate
        npts = ceil_rational_power(p, sigma)
        line = AffineFlat.through((0,), LinearSubspace.full(1, p))
        members = [(line, PointSet.from_iterable([(x,) for x in range(npts)], 1, p))]
        ambient = 1
    else:
        seed = construct_2d(sigma, seed_tau, p)
        members = list(seed.members)
        ambient = 2

    if d > 0:
        members = [_extrude_full(m, d, p) for m in members]
        ambient += d
    if depth > 0:
        members = [w for m in members for w in _extrude_graphs(m, depth, p, ambient)]
        ambient += depth
    if ambient < n:
        members = [_pad_member(m, n, p) for m in members]
    if k - d - 1 > 0:
        slice_dim = n - k + d + 1
        members = _lift_transverse(members, n, k, p, slice_dim)
        branch = f"general-{pr.case}-lifted"
    else:
        branch = f"general-{pr.case}"
    return _family(s, t, n, k, p, branch, members)


def _extrude_full(member, r: int, p: int):
    """Cross a flat and its point set with a full F_p^r factor."""
    flat, ys = member
    q = flat.n
    dim = flat.k
    rows = [list(row) + [0] * r for row in flat.direction.basis.to_rows()]
    for i in range(r):
        fresh = [0] * (q + r)
        fresh[q + i] = 1
        rows.append(fresh)
    pivots = flat.direction.pivots + tuple(range(q, q + r))
    direction = LinearSubspace(
        q + r, dim + r, p, PrimeMatrix.from_rows(rows, p), pivots
    )
    base = flat.base + (0,) * r
    pts = tuple(
        pt + z
        for pt in ys.points
        for z in itertools.product(range(p), repeat=r)
    )
    return AffineFlat(direction, base), PointSet(q + r, p, pts)


def _extrude_graphs(member, depth: int, p: int, ambient: int):
    """All graph flats over `member` in `depth` extra coordinates.

    For a flat U with RREF direction basis B and base u0, the graphs are
    W(T, z) = {(u, y*T + z) : u = u0 + y*B in U}; there are exactly
    p^((dim+1)*depth) of them, pairwise distinct, each projecting onto U.
    """
    flat, ys = member
    q = flat.n
    dim = flat.k
    rows0 = flat.direction.basis.to_rows()
    pivots = flat.direction.pivots
    coeffs = [tuple(pt[c] for c in pivots) for pt in ys.points]
    out = []
    for tmat in itertools.product(
        itertools.product(range(p), repeat=depth), repeat=dim
    ):
        rows = [list(row) + list(trow) for row, trow in zip(rows0, tmat)]
        direction = LinearSubspace(
            q + depth, dim, p, PrimeMatrix.from_rows(rows, p), pivots
        )
        for z in itertools.product(range(p), repeat=depth):
            base = flat.base + z
            pts = tuple(
                pt
                + tuple(
                    (sum(c * trow[j] for c, trow in zip(cf, tmat)) + z[j]) % p
                    for j in range(depth)
                )
                for pt, cf in zip(ys.points, coeffs)
            )
            out.append((AffineFlat(direction, base), PointSet(q + depth, p, pts)))
    return out


def _pad_member(member, n: int, p: int):
    flat, ys = member
    q = flat.n
    extra = n - q
    rows = [list(row) + [0] * extra for row in flat.direction.basis.to_rows()]
    direction = LinearSubspace(
        n, flat.k, p,
        PrimeMatrix.from_rows(rows, p) if rows else PrimeMatrix(p, 0, n, ()),
        flat.direction.pivots,
    )
    base = flat.base + (0,) * extra
    pts = tuple(pt + (0,) * extra for pt in ys.points)
    return AffineFlat(direction, base), PointSet(n, p, pts)


def _lift_transverse(members, n: int, k: int, p: int, slice_dim: int):
    """Replace each low-dimensional flat W by every k-flat through it that
    meets the coordinate slice F_p^slice_dim exactly in W."""
    coordinate_slice = AffineFlat.through(
        (0,) * n, LinearSubspace.coordinate(range(slice_dim), n, p)
    )
    extension_dim = k - (members[0][0].k)
    out = []
    for flat, ys in members:
        seen = set()
        for D in enumerate_linear(n, extension_dim, p):
            direction = LinearSubspace.from_rows(
                flat.direction.basis.to_rows() + D.basis.to_rows(), n, p
            )
            if direction.k != k or direction in seen:
                continue
            candidate = AffineFlat.through(flat.base, direction)
            if relate(candidate, coordinate_slice).transverse:
                seen.add(direction)
                out.append((candidate, ys))
        expected = p ** (extension_dim * (n - k))
        if len(seen) != expected:
            raise DegenerateScaleError(
                f"transverse lift found {len(seen)} flats, expected {expected}"
            )
    return out


def verify_family(f: FurstenbergFamily) -> FamilyValidity:
    """Exact check of the three defining conditions plus structural sanity."""
    failures = []
    if compare_to_scaled_power(len(f.members), f.lam, f.p, f.t) < 0:
        failures.append(
            f"family has {len(f.members)} flats, fewer than lambda*p^t"
        )
    seen = set()
    for i, (flat, ys) in enumerate(f.members):
        if flat.n != f.n or flat.p != f.p:
            failures.append(f"member {i}: flat in wrong space")
            continue
        if flat.k != f.k:
            failures.append(f"member {i}: flat dimension {flat.k} != {f.k}")
        key = (flat.direction.basis.entries, flat.base)
        if key in seen:
            failures.append(f"member {i}: duplicate flat")
        seen.add(key)
        if compare_to_scaled_power(len(ys), f.lam, f.p, f.s) < 0:
            failures.append(f"member {i}: y-set has {len(ys)} points, below lambda*p^s")
        for pt in ys:
            if not flat.contains_point(pt):
                failures.append(f"member {i}: point {pt} lies off its flat")
                break
    recomputed = PointSet.from_iterable(
        (pt for _, ys in f.members for pt in ys), f.n, f.p
    )
    if recomputed.points != f.union.points:
        failures.append("stored union does not match the union of the y-sets")
    return FamilyValidity(not failures, tuple(failures))


def lower_bound_sanity(f: FurstenbergFamily) -> bool:
    """The two unconditional lower bounds, checked exactly:
    #E >= lambda * p^s and #E * #G(k, F_p^n) >= lambda^2 * p^(s+t)."""
    count = len(f.union)
    if compare_to_scaled_power(count, f.lam, f.p, f.s) < 0:
        return False
    grass = gaussian_binomial(f.n, f.k, f.p)
    return compare_to_scaled_power(count * grass, f.lam * f.lam, f.p, f.s + f.t) >= 0


def construction_report(f: FurstenbergFamily) -> ConstructionReport:
    exponent = furstenberg_index(f.s, f.t, f.n, f.k)
    scale = ceil_rational_power(f.p, exponent)
    return ConstructionReport(
        family_id=f"{f.branch} s={f.s} t={f.t} n={f.n} k={f.k} p={f.p}",
        size=len(f.union),
        exponent=exponent,
        scale=scale,
        ratio=Fraction(len(f.union), scale),
        valid=verify_family(f).is_valid,
        lower_ok=lower_bound_sanity(f),
    )


def meets_upper_bound(f: FurstenbergFamily, constant) -> bool:
    """#E <= constant * p^F(s,t;n,k), decided exactly in integers."""
    exponent = furstenberg_index(f.s, f.t, f.n, f.k)
    return compare_to_scaled_power(len(f.union), as_fraction(constant), f.p, exponent) <= 0


def family_to_text(f: FurstenbergFamily) -> str:
    """Line-oriented exact serialization (decimal integers and num/den only)."""
    buf = io.StringIO()
    buf.write("fpfurst-family 1\n")
    buf.write(f"p={f.p} n={f.n} k={f.k} s={f.s} t={f.t} lambda={f.lam} branch={f.branch}\n")
    buf.write(f"members={len(f.members)}\n")
    for flat, ys in f.members:
        rows = ";".join(",".join(map(str, row)) for row in flat.direction.basis.to_rows())
        buf.write(f"member base={','.join(map(str, flat.base))} dir={rows}\n")
        buf.write("y " + " ".join(",".join(map(str, pt)) for pt in ys.points) + "\n")
    return buf.getvalue()


def family_from_text(text: str) -> FurstenbergFamily:
    lines = text.splitlines()
    if not lines or lines[0] != "fpfurst-family 1":
        raise ValueError("not a family serialization")
    header = dict(item.split("=", 1) for item in lines[1].split())
    p, n, k = int(header["p"]), int(header["n"]), int(header["k"])
    s, t = Fraction(header["s"]), Fraction(header["t"])
    members = []
    i = 3
    for _ in range(int(lines[2].split("=")[1])):
        fields = dict(item.split("=", 1) for item in lines[i].split()[1:])
        base = tuple(int(c) for c in fields["base"].split(","))
        rows = [
            [int(c) for c in row.split(",")]
            for row in fields["dir"].split(";")
            if row
        ]
        direction = LinearSubspace.from_rows(rows, n, p)
        pts = tuple(
            tuple(int(c) for c in chunk.split(","))
            for chunk in lines[i + 1].split()[1:]
        )
        members.append((AffineFlat(direction, base), PointSet(n, p, pts)))
        i += 2
    fam = _family(s, t, n, k, p, header["branch"], members)
    if str(Fraction(header["lambda"])) != str(fam.lam):
        raise ValueError("unexpected lambda")
    return fam
