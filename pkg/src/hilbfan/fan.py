"""Normal fans of orbit closures and their boundary combinatorics.

The closure of a family orbit is a toric surface: its fan is the normal
fan of the lattice polygon spanned by the parameter exponents of the
nonvanishing maximal minors of the orbit matrix.  `exponent_support_probe`
finds that polygon's vertices by walking torus limits outward, while
`exponent_support_enumerate` evaluates every candidate minor; both feed
`standard_fan`, which also handles several ideals moving at once via
Minkowski sums.  The remaining functions read data off a labeled fan:
side limits of a direction, boundary diagrams, divisor self-intersections,
median exponents of cone pairs, limit multiplicativity, and weighted cell
counts.
"""

from __future__ import annotations

from collections import namedtuple
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, StructuralZero
from .linalg import det_int
from .orbit import (
    Family,
    ParamIdeal,
    directional_limit,
    minor_exponent,
    param_ideal,
    power_param_ideal,
    ray_limits,
    select_family,
)
from .staircase import Staircase, enumerate_between, from_cells

Vec = tuple[int, int]


def rot_cw(u: Vec) -> Vec:
    return (u[1], -u[0])


def rot_ccw(u: Vec) -> Vec:
    return (-u[1], u[0])


def primitive(u: Sequence[int]) -> Vec:
    """Primitive integer vector on the same ray through the origin."""
    g = gcd(u[0], u[1])
    if g == 0:
        raise DomainError("the zero vector has no direction")
    return (u[0] // g, u[1] // g)


def _det(p: Vec, q: Vec) -> int:
    return p[0] * q[1] - p[1] * q[0]


def _dot(p: Vec, q: Vec) -> int:
    return p[0] * q[0] + p[1] * q[1]


def _sub(p: Vec, q: Vec) -> Vec:
    return (p[0] - q[0], p[1] - q[1])


def _neg(p: Vec) -> Vec:
    return (-p[0], -p[1])


def hull_ccw(points: Iterable[Vec]) -> list[Vec]:
    """Convex hull vertices in counterclockwise order, collinear dropped."""
    pts = sorted(set(points))
    if not pts:
        raise DomainError("empty point set has no hull")
    if len(pts) == 1:
        return pts

    def chain(seq: Iterable[Vec]) -> list[Vec]:
        out: list[Vec] = []
        for p in seq:
            while len(out) >= 2 and _det(_sub(out[-1], out[-2]),
                                         _sub(p, out[-2])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return lower[:-1] + upper[:-1]


def _sector_contains(p: Vec, q: Vec, u: Vec) -> bool:
    """Whether u lies in the closed sector from ray p counterclockwise to q.

    Degenerate sectors are meaningful: q along p is the single ray, q
    along -p the closed half plane on the counterclockwise side of p.
    """
    d = _det(p, q)
    if d > 0:
        return _det(p, u) >= 0 and _det(u, q) >= 0
    if d == 0:
        if _dot(p, q) > 0:
            return _det(p, u) == 0 and _dot(p, u) > 0
        return _det(p, u) >= 0
    return _det(p, u) >= 0 or _det(u, q) >= 0


def _angle_less(s1: tuple[Vec, Vec], s2: tuple[Vec, Vec]) -> bool:
    """Exact comparison of two counterclockwise sector angles."""

    def cat(p: Vec, q: Vec) -> int:
        d = _det(p, q)
        if d > 0:
            return 1
        if d < 0:
            return 3
        return 0 if _dot(p, q) > 0 else 2

    c1, c2 = cat(*s1), cat(*s2)
    if c1 != c2:
        return c1 < c2
    if c1 in (0, 2):
        return False
    # within (0,180) the cotangent dot/det is strictly decreasing, and the
    # reflex case reduces to the same cross-multiplied inequality
    d1, t1 = _det(*s1), _dot(*s1)
    d2, t2 = _det(*s2), _dot(*s2)
    return t1 * d2 > t2 * d1


def _ccw_cmp(v: Vec, w: Vec) -> int:
    """Total order on rays by angle in (-180, 180], counterclockwise."""

    def half(u: Vec) -> int:
        return 0 if u[1] < 0 or (u[1] == 0 and u[0] > 0) else 1

    hv, hw = half(v), half(w)
    if hv != hw:
        return hv - hw
    d = _det(v, w)
    return 0 if d == 0 else (-1 if d > 0 else 1)


def support_point(P: ParamIdeal, M: Staircase) -> Vec:
    """Exponent point of the maximal minor selected by a monomial ideal."""
    cols = [c for c in P.columns if M.contains_monomial(*c)]
    return minor_exponent(P, cols)


class ExponentSupport:
    """Lattice support of the maximal minors of one orbit matrix.

    `points` are exponent pairs carrying some nonvanishing maximal minor,
    `vertex_map` labels each uniquely achieved point with its monomial
    ideal, and `hull` walks the support polygon counterclockwise.  Every
    hull vertex is labeled; interior points need not be.  `method` records
    how the support was found.
    """

    __slots__ = ("param", "points", "vertex_map", "hull", "method")

    def __init__(self, param: ParamIdeal, points: Iterable[Vec],
                 vertex_map: Mapping[Vec, Staircase], method: str):
        self.param = param
        self.points = sorted(set(points))
        self.vertex_map = dict(vertex_map)
        self.method = method
        self.hull = hull_ccw(self.points)
        for v in self.hull:
            assert v in self.vertex_map, f"hull vertex {v} has no unique ideal"

    def __repr__(self) -> str:
        return f"ExponentSupport({self.param.source}, hull={self.hull})"


_PROBES: tuple[Vec, ...] = ((-1, -1), (1, 0), (0, 1), (1, 1))


def exponent_support_probe(P: ParamIdeal) -> ExponentSupport:
    """Support polygon by torus limits alone; finds vertices only.

    Starts from a plane-spanning set of directions, then pushes every
    hull edge along its outward normal until each normal is confirmed as
    a wall whose transverse limits are the edge endpoints.  Limits that
    land on a wall contribute both side limits, so no search over nearby
    directions is ever needed.
    """
    verts: dict[Vec, Staircase] = {}

    def record(M: Staircase) -> Vec:
        pt = support_point(P, M)
        prev = verts.setdefault(pt, M)
        assert prev == M, f"two limits share the support point {pt}"
        return pt

    def probe(u: Vec) -> list[Vec]:
        M = directional_limit(P, u)
        if M is not None:
            return [record(M)]
        wall = ray_limits(P, u)
        return [record(wall.plus), record(wall.minus)]

    for u in _PROBES:
        probe(u)

    while len(verts) > 1:
        hull = hull_ccw(verts)
        if len(hull) == 2:
            edges = [(hull[0], hull[1]), (hull[1], hull[0])]
        else:
            edges = list(zip(hull, hull[1:] + hull[:1]))
        grown = False
        for a, b in edges:
            n = primitive(rot_cw(_sub(b, a)))
            level = _dot(n, a)
            M = directional_limit(P, n)
            if M is not None:
                pt = record(M)
                assert _dot(n, pt) > level, f"probe along {n} did not advance"
                grown = True
                continue
            wall = ray_limits(P, n)
            for side in (wall.plus, wall.minus):
                pt = record(side)
                if _dot(n, pt) > level:
                    grown = True
                else:
                    assert pt in (a, b), f"wall face along {n} is misaligned"
        if not grown:
            break

    return ExponentSupport(P, verts, verts, "probing")


def exponent_support_enumerate(P: ParamIdeal) -> ExponentSupport:
    """Support by evaluating every candidate maximal minor exactly.

    Candidates are the monomial ideals of the source colength sandwiched
    between the window truncation and the hull of the base cells; each
    selects one maximal minor, an integer times a forced parameter
    monomial, and the integer determinant decides vanishing.
    """
    d = P.source.colength()
    high = from_cells(P.base_cells)
    low = from_cells(list(P.base_cells) + list(P.columns))
    col_index = {c: k for k, c in enumerate(P.columns)}
    points: list[Vec] = []
    claims: dict[Vec, list[Staircase]] = {}
    for M in enumerate_between(d, low=low, high=high):
        cols = [c for c in P.columns if M.contains_monomial(*c)]
        assert len(cols) == len(P.rows), "window miscounts a candidate"
        try:
            pt = minor_exponent(P, cols)
        except StructuralZero:
            continue
        mat = [[row[col_index[c]] for c in cols] for row in P.rows]
        dv = det_int(mat)
        if (dv % P.char if P.char else dv) == 0:
            continue
        points.append(pt)
        claims.setdefault(pt, []).append(M)
    vertex_map = {pt: Ms[0] for pt, Ms in claims.items() if len(Ms) == 1}
    return ExponentSupport(P, points, vertex_map, "enumeration")


class Cone:
    """One cone of a complete plane fan, labeled by its monomial limit.

    `rays` is () for the whole plane or a (start, end) pair spanning the
    sector counterclockwise from start to end; `vertex` is the support
    point the label came from.
    """

    __slots__ = ("rays", "label", "vertex")

    def __init__(self, rays, label, vertex):
        self.rays = tuple(tuple(r) for r in rays)
        self.label = label
        self.vertex = tuple(vertex)

    def contains(self, u: Sequence[int]) -> bool:
        u = tuple(u)
        if u == (0, 0):
            raise DomainError("zero direction")
        if not self.rays:
            return True
        return _sector_contains(self.rays[0], self.rays[1], u)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cone) and self.rays == other.rays
                and self.label == other.label and self.vertex == other.vertex)

    def __repr__(self) -> str:
        return f"Cone({self.rays}, {self.label!r})"


class Fan2D:
    """Complete labeled fan in the plane.

    `rays` lists primitive ray generators in counterclockwise cyclic
    order and cones[k] spans rays[k] to rays[k+1]; a fan with no rays is
    the whole plane under a single fixed limit.  Labels are staircases,
    or tuples of staircases when several ideals move together.
    """

    __slots__ = ("rays", "cones", "source", "family", "char")

    def __init__(self, rays: Sequence[Vec], cones: Sequence[Cone], source,
                 family: Family, char: int):
        self.rays = [tuple(r) for r in rays]
        self.cones = list(cones)
        self.source = source
        self.family = family
        self.char = char

    def labels(self) -> list:
        return [c.label for c in self.cones]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Fan2D) and self.rays == other.rays
                and self.cones == other.cones)

    def __repr__(self) -> str:
        return (f"Fan2D({self.source}, rays={self.rays}, "
                f"family={self.family.name}, char={self.char})")


def _build_fan(points: Iterable[Vec], labels: Mapping[Vec, object], source,
               family: Family, char: int) -> Fan2D:
    hull = hull_ccw(points)
    for v in hull:
        assert v in labels, f"hull vertex {v} is unlabeled"
    if len(hull) == 1:
        v = hull[0]
        return Fan2D([], [Cone((), labels[v], v)], source, family, char)
    if len(hull) == 2:
        v1, v2 = hull
        n = primitive(rot_cw(_sub(v2, v1)))
        nn = _neg(n)
        cones = [Cone((n, nn), labels[v2], v2), Cone((nn, n), labels[v1], v1)]
        return Fan2D([n, nn], cones, source, family, char)
    m = len(hull)
    rays = [primitive(rot_cw(_sub(hull[(k + 1) % m], hull[k])))
            for k in range(m)]
    cones = [Cone((rays[k], rays[(k + 1) % m]), labels[hull[(k + 1) % m]],
                  hull[(k + 1) % m]) for k in range(m)]
    return Fan2D(rays, cones, source, family, char)


_FAN_CACHE: dict[tuple, Fan2D] = {}


def standard_fan(ideals, char: int = 0, method: str = "probe",
                 cache: dict | None = None) -> Fan2D:
    """Labeled normal fan of a family orbit closure.

    Takes a staircase or a nonempty iterable of them.  Several ideals
    move together under their common family, the support becomes the
    Minkowski sum of the factor supports, and labels become tuples of
    factor limits; a single ideal (bare or one-element list) keeps plain
    staircase labels.  Powers of the width-4 step ideal route through
    the tight window model automatically.
    """
    factors = [ideals] if isinstance(ideals, Staircase) else list(ideals)
    if not factors:
        raise DomainError("need at least one ideal")
    single = len(factors) == 1
    if method not in ("probe", "enumerate"):
        raise DomainError(f"unknown support method {method!r}")
    family = select_family(factors)
    key = (tuple(sc.heights for sc in factors), family.name, char, method)
    store = _FAN_CACHE if cache is None else cache
    hit = store.get(key)
    if hit is not None:
        return hit

    compute = (exponent_support_enumerate if method == "enumerate"
               else exponent_support_probe)
    supports = []
    for sc in factors:
        steps = sc.steps()
        if steps and all(s == 4 for s in steps) and family.name == "G41":
            P = power_param_ideal(len(steps), char)
        else:
            P = param_ideal(sc, family, char)
        supports.append(compute(P))

    if single:
        sup = supports[0]
        fan = _build_fan(sup.points, sup.vertex_map, factors[0], family, char)
    else:
        # vertices of a Minkowski sum are sums of factor vertices, with a
        # unique decomposition; ambiguous sums can only land off the hull
        acc: dict[Vec, set[tuple]] = {(0, 0): {()}}
        for sup in supports:
            nxt: dict[Vec, set[tuple]] = {}
            for pt, tups in acc.items():
                for v in sup.hull:
                    lab = sup.vertex_map[v]
                    dst = nxt.setdefault((pt[0] + v[0], pt[1] + v[1]), set())
                    dst.update(t + (lab,) for t in tups)
            acc = nxt
        labels = {pt: next(iter(tups)) for pt, tups in acc.items()
                  if len(tups) == 1}
        fan = _build_fan(list(acc), labels, tuple(factors), family, char)

    store[key] = fan
    return fan


AdjacentLimits = namedtuple("AdjacentLimits", ("plus", "minus"))


def adjacent(F: Fan2D, u: Sequence[int]) -> AdjacentLimits:
    """Labels on the two sides of a direction.

    `plus` is the label just clockwise of u and `minus` just
    counterclockwise; they agree when u is interior to a cone.
    """
    u = tuple(u)
    if u == (0, 0):
        raise DomainError("zero direction")
    if not F.rays:
        lab = F.cones[0].label
        return AdjacentLimits(lab, lab)
    p = primitive(u)
    if p in F.rays:
        k = F.rays.index(p)
        return AdjacentLimits(F.cones[(k - 1) % len(F.cones)].label,
                              F.cones[k].label)
    for cone in F.cones:
        if cone.contains(p):
            return AdjacentLimits(cone.label, cone.label)
    raise DomainError(f"no cone contains {u}")


class BoundaryDiagram:
    """Alternating cone labels and rays along a compactified orbit boundary.

    `entries` runs clockwise from the vertical ray (0, 1), alternating
    labels and primitive rays and ending at the last listed ray; the rays
    (-1, 0) and (0, -1) bound the two distinguished affine charts and are
    omitted.  `top_ideal` is the label just counterclockwise of the first
    ray; `top_shown` records whether it leads `entries` (it does exactly
    when the first ray is not (0, 1) itself).
    """

    __slots__ = ("entries", "top_ideal", "top_shown")

    def __init__(self, entries: list, top_ideal, top_shown: bool):
        self.entries = entries
        self.top_ideal = top_ideal
        self.top_shown = top_shown

    def __eq__(self, other) -> bool:
        return (isinstance(other, BoundaryDiagram)
                and self.entries == other.entries
                and self.top_ideal == other.top_ideal
                and self.top_shown == other.top_shown)

    def __repr__(self) -> str:
        return f"BoundaryDiagram({self.entries})"


_AFFINE_RAYS: tuple[Vec, ...] = ((-1, 0), (0, -1))


def boundary_diagram(F: Fan2D) -> BoundaryDiagram:
    """Boundary reading of a fan, top entry first."""
    rays_d = [r for r in F.rays if r not in _AFFINE_RAYS]
    rays_d.sort(key=cmp_to_key(_ccw_cmp), reverse=True)
    if not rays_d:
        lab = F.cones[0].label
        return BoundaryDiagram([lab], lab, True)
    top = adjacent(F, rays_d[0]).minus
    top_shown = rays_d[0] != (0, 1)
    entries: list = [top] if top_shown else []
    for k, r in enumerate(rays_d):
        entries.append(r)
        if k + 1 < len(rays_d):
            entries.append(adjacent(F, r).plus)
    return BoundaryDiagram(entries, top, top_shown)


def self_intersections(F: Fan2D) -> dict[Vec, int]:
    """Self-intersection number of each ray's divisor in a smooth fan.

    Requires every pair of adjacent rays to be a positively oriented
    lattice basis; then the two neighbors of a ray v satisfy
    u + w = k*v and the divisor of v has self-intersection -k.
    """
    m = len(F.rays)
    if m < 3:
        raise DomainError("fan has no two-dimensional cones")
    for k in range(m):
        if _det(F.rays[k], F.rays[(k + 1) % m]) != 1:
            raise DomainError(
                "fan is not smooth at the cone spanned by "
                f"{F.rays[k]} and {F.rays[(k + 1) % m]}")
    out: dict[Vec, int] = {}
    for k in range(m):
        u, v, w = F.rays[(k - 1) % m], F.rays[k], F.rays[(k + 1) % m]
        s = (u[0] + w[0], u[1] + w[1])
        kk = s[0] // v[0] if v[0] else s[1] // v[1]
        assert s == (kk * v[0], kk * v[1]), "neighbor sum is off the ray"
        out[v] = -kk
    return out


def _cone_index(F: Fan2D, label) -> int:
    for k, cone in enumerate(F.cones):
        if cone.label == label:
            return k
    raise DomainError(f"{label!r} is not a cone label of this fan")


def median_point(F: Fan2D, I1: Staircase, I2: Staircase) -> Vec:
    """Median exponent of two cone labels of F.

    The quarter turn of the parameter exponent balancing the cell sums of
    the two ideals; the first ideal must carry the larger x cell sum
    (which also rules out I1 == I2).
    """
    if not isinstance(I1, Staircase) or not isinstance(I2, Staircase):
        raise DomainError("median points need single staircase labels")
    c = sum(i for i, _ in I1.cells()) - sum(i for i, _ in I2.cells())
    d = sum(j for _, j in I2.cells()) - sum(j for _, j in I1.cells())
    if c <= 0:
        raise DomainError("first ideal must have the larger x cell sum")
    return rot_ccw(F.family.lam((c, -d)))


def median_check(F: Fan2D, I1: Staircase, I2: Staircase) -> bool:
    """Whether the median point of two cone labels separates their cones.

    True when the median point or its negative lies in the smaller closed
    sector between the two labeled cones; for adjacent cones that sector
    is their shared ray.
    """
    pt = median_point(F, I1, I2)
    k1 = _cone_index(F, I1)
    k2 = _cone_index(F, I2)
    m = len(F.rays)
    g1 = (F.rays[(k1 + 1) % m], F.rays[k2])
    g2 = (F.rays[(k2 + 1) % m], F.rays[k1])
    if _angle_less(g1, g2):
        gaps = [g1]
    elif _angle_less(g2, g1):
        gaps = [g2]
    else:
        gaps = [g1, g2]
    return any(_sector_contains(a, b, q)
               for a, b in gaps for q in (pt, _neg(pt)))


def primitive_directions(bound: int = 2) -> list[Vec]:
    """All primitive integer directions with coordinates up to a bound."""
    out = []
    for i in range(-bound, bound + 1):
        for j in range(-bound, bound + 1):
            if (i, j) != (0, 0) and gcd(i, j) == 1:
                out.append((i, j))
    return sorted(out)


def multiplicativity_check(I1: Staircase, I2: Staircase,
                           directions: Iterable[Sequence[int]] | None = None,
                           char: int = 0, method: str = "probe",
                           cache: dict | None = None) -> bool:
    """Whether limits multiply into the limit of the product.

    For each direction the clockwise side limit is taken in the fans of
    I1, I2 and I1*I2, and the product of the factor limits must be
    contained in the product limit.  True iff that holds for every given
    direction (default: all 16 primitive directions with coordinates up
    to 2).
    """
    if directions is None:
        directions = primitive_directions(2)
    F1 = standard_fan(I1, char=char, method=method, cache=cache)
    F2 = standard_fan(I2, char=char, method=method, cache=cache)
    F12 = standard_fan(I1 * I2, char=char, method=method, cache=cache)
    for u in directions:
        L1 = adjacent(F1, u).plus
        L2 = adjacent(F2, u).plus
        L12 = adjacent(F12, u).plus
        if not L12.contains(L1 * L2):
            return False
    return True


def graded_cell_counts(sc: Staircase, wx: int, wy: int) -> dict[int, int]:
    """Number of standard monomials in each weighted degree."""
    out: dict[int, int] = {}
    for i, j in sc.cells():
        w = i * wx + j * wy
        out[w] = out.get(w, 0) + 1
    return out
