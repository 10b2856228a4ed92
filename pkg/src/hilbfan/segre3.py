"""Coordinate spans of three-parameter alignments and their support geometry.

The two-parameter families in :mod:`hilbfan.orbit` cover alignments whose
measuring sequence fits (4, 1) or (3, 2).  Wider alignments need the
three-parameter substitution G51 (x -> x + a y^2 + b y^3 + c y^4), whose
parameter monomials are no longer forced by bidegree, so the machinery here
works directly with polynomial spanning matrices instead of ParamIdeal rows:

* ``window_matrix`` writes the transformed ideal inside a finite degree
  window as a matrix over Z[a, b, c];
* ``minor_span`` reduces the span of all maximal minors of that matrix,
  which are the homogeneous coordinates of one factor;
* ``coordinate_span`` multiplies factor spans together, one minor per
  factor, reducing incrementally so the intermediate bases stay small;
* ``support_picture`` classifies each exponent point of the span by
  whether its pure monomial lies in the span, and extracts the sporadic
  generators that survive modulo the in-span monomials;
* ``hull3_faces`` computes the exact integer convex hull of the support
  in 3-space, one facet per maximal supporting plane.

Everything is exact; no floating point enters the hull or the spans.
"""

from __future__ import annotations

from itertools import combinations
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .errors import DomainError
from .linalg import (
    _bareiss_echelon,
    det_fraction_free,
    reduce_rows,
    right_kernel,
)
from .orbit import G51, Family
from .poly import MultiPoly
from .staircase import Staircase, from_monomials, measuring_sequence

ABC = ("a", "b", "c")

Point3 = tuple[int, int, int]


# -- spanning matrices and minor spans ----------------------------------------


def window_matrix(
    sc: Staircase, family: Family = G51
) -> tuple[list[list[MultiPoly]], list[tuple[int, int]]]:
    """Spanning matrix of the transformed ideal in its degree window.

    Rows are the monomials of ``sc`` of total degree below the colength,
    pushed through the family substitution with every term of degree at
    least the colength discarded.  Columns are the monomials of the
    enclosing support staircase in the same window; entries collect the
    parameter parts.  Returns ``(rows, columns)``.
    """
    d = sc.colength()
    mons = sorted((u, v) for u in range(d) for v in range(d - u)
                  if sc.contains_monomial(u, v))
    polys = [family.substituted_monomial(u, v, 0) for u, v in mons]
    support = {(e[4], e[5]) for p in polys for e in p.terms}
    # pad with pure powers so the support closes up to a finite staircase
    support.add((d, 0))
    support.add((0, d))
    outer = from_monomials(support)
    columns = sorted((i, j) for i in range(d) for j in range(d - i)
                     if outer.contains_monomial(i, j))
    col_of = {m: k for k, m in enumerate(columns)}
    rows = []
    for p in polys:
        row = [MultiPoly.zero(0)] * len(columns)
        for exps, coeff in p.terms.items():
            mono = (exps[4], exps[5])
            if mono[0] + mono[1] >= d:
                continue
            row[col_of[mono]] = row[col_of[mono]] + MultiPoly.monomial(
                coeff, {"a": exps[1], "b": exps[2], "c": exps[3]})
        rows.append(row)
    return rows, columns


def minor_span(sc: Staircase, family: Family = G51) -> list[MultiPoly]:
    """Reduced basis of the span of all maximal minors of the window matrix.

    Every maximal minor of a full-row-rank matrix equals, up to a single
    global ratio and an alternating sign, the complementary maximal minor
    of any basis of the right kernel.  Signs do not matter to the span, so
    the kernel minors are reduced first and rescaled once; this keeps the
    determinant work on the kernel side, whose row count is the window
    codimension rather than the row count of the matrix itself.
    """
    mat, _ = window_matrix(sc, family)
    r, n = len(mat), len(mat[0])
    _, pivots = _bareiss_echelon([list(row) for row in mat], 0)
    if len(pivots) != r:
        raise DomainError(f"window matrix of {sc!r} drops rank")
    base_cols = tuple(pivots)
    scale_num = det_fraction_free(
        [[mat[i][j] for j in base_cols] for i in range(r)])
    ker = right_kernel(mat)

    def kernel_minor(cols: tuple[int, ...]) -> MultiPoly:
        if not cols:
            return MultiPoly.constant(1)
        return det_fraction_free(
            [[ker[i][j] for j in cols] for i in range(len(cols))])

    base_set = set(base_cols)
    scale_den = kernel_minor(tuple(j for j in range(n) if j not in base_set))
    duals = [q for q in (kernel_minor(cols)
                         for cols in combinations(range(n), n - r)) if q]
    reduced = reduce_rows(duals, family.params)
    return [(scale_num * q).exact_div(scale_den) for q in reduced]


def coordinate_span(
    ideals: Staircase | Iterable[Staircase], family: Family = G51
) -> list[MultiPoly]:
    """Reduced basis of the coordinate functions of an alignment.

    The coordinates of a product of factors are products of factor
    coordinates, one maximal minor per factor.  The fold multiplies the
    running reduced basis by each factor's reduced minor basis and
    re-reduces, so no intermediate list ever exceeds (running dimension)
    x (factor dimension) polynomials.
    """
    if isinstance(ideals, Staircase):
        ideals = [ideals]
    factors = list(ideals)
    if not factors:
        raise DomainError("need at least one ideal")
    for sc in factors:
        m = measuring_sequence(sc)
        if not family.admits(m):
            raise DomainError(
                f"measuring sequence {m} of {sc!r} exceeds family "
                f"{family.name} capacity {family.max_measuring}")
    span = [MultiPoly.constant(1)]
    for sc in factors:
        basis = minor_span(sc, family)
        span = reduce_rows([s * m for s in span for m in basis],
                           family.params)
    return span


# -- support pictures ----------------------------------------------------------


class SupportPicture:
    """Exponent support of a coordinate span, classified point by point.

    ``points`` holds every (e_a, e_b, e_c) exponent triple occurring in the
    span.  ``monomial_flags`` marks, per point, whether the pure monomial
    a^e_a b^e_b c^e_c itself lies in the span; points flagged False are the
    open circles of the dot plot.  ``sporadic`` is a basis of the span
    modulo the subspace spanned by the in-span monomials; each generator is
    a primitive integer polynomial supported entirely on flagged-out points.
    """

    __slots__ = ("points", "monomial_flags", "sporadic")

    def __init__(self, points: frozenset[Point3],
                 monomial_flags: dict[Point3, bool],
                 sporadic: list[MultiPoly]):
        self.points = points
        self.monomial_flags = monomial_flags
        self.sporadic = sporadic

    def __repr__(self) -> str:
        holes = sum(1 for f in self.monomial_flags.values() if not f)
        return (f"SupportPicture({len(self.points)} points, {holes} open, "
                f"{len(self.sporadic)} sporadic)")

    def to_dict(self) -> dict:
        return {
            "points": [list(p) for p in sorted(self.points)],
            "open": [list(p) for p in sorted(self.points)
                     if not self.monomial_flags[p]],
            "sporadic": [str(p) for p in self.sporadic],
        }


def support_picture(span: Sequence[MultiPoly]) -> SupportPicture:
    """Classify the support of a span of polynomials in a, b, c.

    A pure monomial lies in the span exactly when it appears as a one-term
    row of the fully reduced basis: any span member is a combination of
    reduced rows, and the pivot coordinates of the combination are visible
    coefficients.  The remaining rows are then automatically supported off
    the in-span monomials (their pivots belong to no other row, their tails
    are non-pivot), so they form the sporadic basis as they stand.
    """
    basis = reduce_rows(list(span), ABC)
    in_span: set[Point3] = set()
    sporadic: list[MultiPoly] = []
    for p in basis:
        single = p.single_term()
        if single is not None:
            e = single[0]
            in_span.add((e[1], e[2], e[3]))
        else:
            sporadic.append(p.normalized())
    points = frozenset((e[1], e[2], e[3]) for p in basis for e in p.terms)
    flags = {pt: pt in in_span for pt in points}
    return SupportPicture(points, flags, sporadic)


# -- exact integer convex hulls in 3-space -------------------------------------


class Facet(NamedTuple):
    """One maximal planar face: outward normal, offset, contact points.

    The primitive integer ``normal`` and ``offset`` satisfy
    normal . p <= offset for every input point, with equality exactly on
    ``points`` (all input points lying on the face, not just vertices).
    """

    normal: Point3
    offset: int
    points: tuple[Point3, ...]


def _primitive_plane(n: Point3, off: int) -> tuple[Point3, int]:
    g = gcd(gcd(abs(n[0]), abs(n[1])), gcd(abs(n[2]), abs(off)))
    if g > 1:
        n = (n[0] // g, n[1] // g, n[2] // g)
        off //= g
    if n < (0, 0, 0):
        n = (-n[0], -n[1], -n[2])
        off = -off
    return n, off


def _affine_span_error(pts: list[Point3]) -> DomainError:
    p0 = pts[0]
    p1 = next((p for p in pts if p != p0), None)
    if p1 is None:
        return DomainError(f"points affinely span only the single point {p0}")
    u = (p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2])
    for p in pts:
        v = (p[0] - p0[0], p[1] - p0[1], p[2] - p0[2])
        cross = (u[1] * v[2] - u[2] * v[1],
                 u[2] * v[0] - u[0] * v[2],
                 u[0] * v[1] - u[1] * v[0])
        if cross != (0, 0, 0):
            n, off = _primitive_plane(
                cross, cross[0] * p0[0] + cross[1] * p0[1] + cross[2] * p0[2])
            return DomainError(
                f"points affinely span only the plane "
                f"{n} . (x, y, z) = {off}")
    return DomainError(
        f"points affinely span only the line through {p0} and {p1}")


def hull3_faces(points: Iterable[Point3]) -> list[Facet]:
    """Facets of the convex hull of integer points in 3-space.

    Enumerates every plane spanned by a triple of input points, keeps the
    ones with all points on a single side, and reports each such plane once
    with its full contact set; a supporting plane spanned by input points
    always meets the hull in a two-dimensional face, so the result is the
    maximal facet list with no merging step.  Cubic in the point count with
    cheap rejection, which is plenty for picture-sized inputs.

    Raises DomainError on degenerate input, naming the affine span.
    """
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) < 4:
        raise _affine_span_error(pts) if pts else DomainError("no points")
    seen: set[tuple[Point3, int]] = set()
    facets: list[Facet] = []
    degenerate = True
    for i in range(len(pts)):
        ax, ay, az = pts[i]
        for j in range(i + 1, len(pts)):
            ux, uy, uz = pts[j][0] - ax, pts[j][1] - ay, pts[j][2] - az
            for k in range(j + 1, len(pts)):
                vx, vy, vz = pts[k][0] - ax, pts[k][1] - ay, pts[k][2] - az
                n = (uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx)
                if n == (0, 0, 0):
                    continue
                key = _primitive_plane(n, n[0] * ax + n[1] * ay + n[2] * az)
                if key in seen:
                    continue
                seen.add(key)
                n, off = key
                below = above = False
                for px, py, pz in pts:
                    s = n[0] * px + n[1] * py + n[2] * pz - off
                    if s > 0:
                        above = True
                        if below:
                            break
                    elif s < 0:
                        below = True
                        if above:
                            break
                if above and below:
                    degenerate = False
                    continue
                if above:  # flip to the outward side
                    n = (-n[0], -n[1], -n[2])
                    off = -off
                if above or below:
                    degenerate = False
                contact = tuple(
                    p for p in pts
                    if n[0] * p[0] + n[1] * p[1] + n[2] * p[2] == off)
                facets.append(Facet(n, off, contact))
    if degenerate:
        # every spanned plane contained all points, or no plane was spanned
        raise _affine_span_error(pts)
    return sorted(facets)
