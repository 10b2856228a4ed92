"""Parametrized orbits of monomial ideals under unipotent coordinate changes.

A `Family` is a substitution like x -> x + a*y^2 + b*y^3 whose parameters
carry lattice bidegrees, so that applying it to a monomial ideal and
truncating to a finite monomial window gives a matrix in which every entry
is an integer times a forced parameter monomial.  `ParamIdeal` stores the
stripped integer matrix; torus limits of the orbit along any direction
then reduce to initial subspaces of it (`directional_limit`, `ray_limits`).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DomainError, StructuralZero, UnsupportedMeasuringSequence
from .linalg import initial_subspace
from .poly import MultiPoly
from .staircase import Staircase, from_cells, from_monomials, measuring_sequence


class Family:
    """A unipotent substitution of x, y with torus-weighted parameters.

    `images` maps each coordinate to the term list of its substitute,
    each term being (parameter name or None, (i, j) monomial exponents).
    Parameter bidegrees are forced by making the substitution preserve
    the (deg_x, deg_y) bigrading.
    """

    __slots__ = ("name", "params", "bidegrees", "images", "max_measuring")

    def __init__(self, name, params, bidegrees, images, max_measuring):
        self.name = name
        self.params = params
        self.bidegrees = bidegrees
        self.images = images
        self.max_measuring = max_measuring

    def __repr__(self) -> str:
        return f"Family({self.name})"

    def admits(self, measuring: tuple[int, int]) -> bool:
        return (measuring[0] <= self.max_measuring[0]
                and measuring[1] <= self.max_measuring[1])

    def image(self, var: str, char: int = 0) -> MultiPoly:
        out = MultiPoly.zero(char)
        for param, (i, j) in self.images[var]:
            exps = {"x": i, "y": j}
            if param is not None:
                exps[param] = 1
            out = out + MultiPoly.monomial(1, exps, char)
        return out

    def substituted_monomial(self, u: int, v: int, char: int = 0) -> MultiPoly:
        """Image of x^u y^v under the substitution, as an exact polynomial."""
        return self._power("x", u, char) * self._power("y", v, char)

    def _power(self, var: str, k: int, char: int) -> MultiPoly:
        key = (self.name, char, var, k)
        hit = _POWERS.get(key)
        if hit is None:
            if k == 0:
                hit = MultiPoly.constant(1, char)
            else:
                hit = self._power(var, k - 1, char) * self.image(var, char)
            _POWERS[key] = hit
        return hit

    def lam(self, delta: tuple[int, int]) -> tuple[int, int]:
        """Parameter exponents whose combined bidegree equals delta.

        Solves the 2x2 system over the parameter bidegrees; both families
        below are unimodular, so the solution is integral (components may
        be negative, which marks structurally impossible entries).
        """
        if len(self.params) != 2:
            raise DomainError(f"{self.name} parameters are not bidegree-determined")
        (p1, q1), (p2, q2) = (self.bidegrees[p] for p in self.params)
        det = p1 * q2 - q1 * p2
        a = delta[0] * q2 - delta[1] * p2
        b = delta[1] * p1 - delta[0] * q1
        if a % det or b % det:
            raise DomainError(f"bidegree {delta} is not a parameter monomial")
        return (a // det, b // det)

    def monomial_weight(self, u: tuple[int, int], mono: tuple[int, int]) -> int:
        """Torus weight of a window monomial in the direction u."""
        al, be = self.lam(mono)
        return u[0] * al + u[1] * be

    def xy_ray_weights(self, u: tuple[int, int]) -> dict[str, int]:
        """Weights of x and y for the residual torus along the ray u."""
        return {
            "x": -self.monomial_weight(u, (1, 0)),
            "y": -self.monomial_weight(u, (0, 1)),
        }


_POWERS: dict[tuple, MultiPoly] = {}

G41 = Family(
    "G41",
    ("a", "b"),
    {"a": (1, -2), "b": (1, -3)},
    {"x": [(None, (1, 0)), ("a", (0, 2)), ("b", (0, 3))], "y": [(None, (0, 1))]},
    (4, 1),
)

G32 = Family(
    "G32",
    ("a", "b"),
    {"a": (1, -2), "b": (-1, 1)},
    {"x": [(None, (1, 0)), ("a", (0, 2))], "y": [(None, (0, 1)), ("b", (1, 0))]},
    (3, 2),
)

G51 = Family(
    "G51",
    ("a", "b", "c"),
    {"a": (1, -2), "b": (1, -3), "c": (1, -4)},
    {
        "x": [(None, (1, 0)), ("a", (0, 2)), ("b", (0, 3)), ("c", (0, 4))],
        "y": [(None, (0, 1))],
    },
    (5, 1),
)


def select_family(staircases: Staircase | Iterable[Staircase]) -> Family:
    """Smallest two-parameter family able to move every given ideal."""
    if isinstance(staircases, Staircase):
        staircases = [staircases]
    m1 = m2 = 1
    for sc in staircases:
        a, b = measuring_sequence(sc)
        m1 = max(m1, a)
        m2 = max(m2, b)
    for fam in (G41, G32):
        if fam.admits((m1, m2)):
            return fam
    raise UnsupportedMeasuringSequence(
        f"measuring sequence ({m1}, {m2}) exceeds every two-parameter family"
    )


def _column_key(mono: tuple[int, int], xweight: int) -> tuple[int, int]:
    i, j = mono
    return (-(xweight * i + j), -j)


class ParamIdeal:
    """Integer matrix model of a family orbit inside a monomial window.

    `columns` are window monomials, `rows` the integer coefficient vectors
    of the substituted spanning set (one per ideal monomial used), and
    `base_cells` the standard monomials below the window that every torus
    limit misses.  The parameter monomial on entry (r, c) is implicit:
    family.lam(row_bidegrees[r] - columns[c]).
    """

    __slots__ = ("family", "char", "source", "columns", "rows",
                 "row_bidegrees", "base_cells")

    def __init__(self, family, char, source, columns, rows, row_bidegrees,
                 base_cells):
        self.family = family
        self.char = char
        self.source = source
        self.columns = columns
        self.rows = rows
        self.row_bidegrees = row_bidegrees
        self.base_cells = base_cells

    def __repr__(self) -> str:
        return (f"ParamIdeal({self.source}, {self.family.name}, "
                f"{len(self.rows)}x{len(self.columns)}, char={self.char})")


def _extract_row(family, poly, bideg, col_of, inner_test, char):
    """Strip the forced parameter monomials off one substituted polynomial."""
    row = [0] * len(col_of)
    cidx = {"a": 1, "b": 2}
    for exps, coeff in poly.terms.items():
        if exps[0] != 0 or exps[3] != 0:
            raise DomainError("unexpected variable in substituted row")
        mono = (exps[4], exps[5])
        if inner_test(mono):
            continue
        al, be = family.lam((bideg[0] - mono[0], bideg[1] - mono[1]))
        if (exps[1], exps[2]) != (al, be):
            raise DomainError(
                f"entry at {mono} is not bidegree-forced: "
                f"a^{exps[1]} b^{exps[2]} vs a^{al} b^{be}"
            )
        row[col_of[mono]] = coeff.num if char else coeff.as_int()
    return row


def param_ideal(sc: Staircase, family: Family | None = None,
                char: int = 0) -> ParamIdeal:
    """Generic orbit model: window between the support hull and m^d."""
    d = sc.colength()
    if d == 0:
        raise DomainError("the unit ideal has a trivial orbit")
    if family is None:
        family = select_family(sc)
    mons = [(u, v) for u in range(d) for v in range(d - u)
            if sc.contains_monomial(u, v)]
    mons.sort(key=lambda m: _column_key(m, 1))
    polys = [family.substituted_monomial(u, v, char) for u, v in mons]

    support = {(e[4], e[5]) for p in polys for e in p.terms}
    support.add((d, 0))
    support.add((0, d))
    outer = from_monomials(support)
    columns = sorted(
        ((i, j) for i in range(d) for j in range(d - i)
         if outer.contains_monomial(i, j)),
        key=lambda m: _column_key(m, 1),
    )
    col_of = {m: k for k, m in enumerate(columns)}
    inner = lambda m: m[0] + m[1] >= d
    rows = [_extract_row(family, p, m, col_of, inner, char)
            for p, m in zip(polys, mons)]
    base_cells = [c for c in outer.cells() if c[0] + c[1] < d]
    return ParamIdeal(family, char, sc, columns, rows, mons, base_cells)


def power_param_ideal(m: int, char: int = 0) -> ParamIdeal:
    """Tight orbit model for the m-th power of the width-4 step ideal.

    The window is the step-ideal filtration slice between levels m and 2m
    (weighted degree 2i + j in [2m, 4m)), and the 2m^2 spanning rows are
    the products g(x)^c x^d y^e with 4c + 2d + e in {4m, 4m+1}, c >= 1,
    where g is the moved coordinate.  This window is exponentially smaller
    than the generic one and stays exact for every torus limit.
    """
    if m < 1:
        raise DomainError("power must be positive")
    fam = G41

    def level(mono: tuple[int, int]) -> int:
        return mono[0] + mono[1] // 2

    columns = sorted(
        ((i, j) for i in range(2 * m + 1) for j in range(4 * m)
         if m <= level((i, j)) < 2 * m),
        key=lambda mo: _column_key(mo, 2),
    )
    assert len(columns) == 3 * m * m + m
    col_of = {mo: k for k, mo in enumerate(columns)}

    triples = [(c, dd, e)
               for c in range(1, m + 1)
               for dd in range((4 * m + 1 - 4 * c) // 2 + 1)
               for e in (4 * m - 4 * c - 2 * dd, 4 * m + 1 - 4 * c - 2 * dd)
               if e >= 0]
    triples = sorted(set(triples))
    assert len(triples) == 2 * m * m

    rows = []
    bidegs = []
    for c, dd, e in triples:
        poly = fam.substituted_monomial(c, e, char) * MultiPoly.monomial(
            1, {"x": dd}, char)
        bideg = (c + dd, e)
        rows.append(_extract_row(fam, poly, bideg, col_of,
                                 lambda mo: level(mo) >= 2 * m, char))
        bidegs.append(bideg)

    source = Staircase.from_steps((4,)) ** m
    base_cells = (Staircase.from_steps((2,)) ** m).cells()
    return ParamIdeal(fam, char, source, columns, rows, bidegs, base_cells)


def initial_rows(P: ParamIdeal, u: tuple[int, int],
                 rows: Sequence[Sequence[int]] | None = None) -> list[list[int]]:
    """Initial subspace of the orbit matrix in the direction u."""
    w = [P.family.monomial_weight(u, c) for c in P.columns]
    return initial_subspace(P.rows if rows is None else rows, w, P.char)


def _unit_pivots(rows: Sequence[Sequence[int]]) -> list[int] | None:
    """Pivot columns if every row is a plain unit vector, else None."""
    pivots = []
    for r in rows:
        nz = [k for k, v in enumerate(r) if v]
        if len(nz) != 1 or r[nz[0]] != 1:
            return None
        pivots.append(nz[0])
    return pivots


def _staircase_from(P: ParamIdeal, reduced: Sequence[Sequence[int]]) -> Staircase | None:
    pivots = _unit_pivots(reduced)
    if pivots is None:
        return None
    taken = set(pivots)
    cells = list(P.base_cells)
    cells.extend(c for k, c in enumerate(P.columns) if k not in taken)
    return from_cells(cells)


def directional_limit(P: ParamIdeal, u: tuple[int, int]) -> Staircase | None:
    """Torus limit of the orbit along u; None when it is not monomial."""
    if u == (0, 0):
        raise DomainError("zero direction")
    return _staircase_from(P, initial_rows(P, u))


def attach_params(P: ParamIdeal, row: Sequence[int],
                  bideg: tuple[int, int] | None = None) -> MultiPoly:
    """Rebuild the parameter-carrying polynomial of one integer row.

    The row is bidegree-homogeneous up to a global parameter monomial;
    exponents are normalized so that each parameter's minimum is zero.
    """
    support = [(k, v) for k, v in enumerate(row) if v]
    if not support:
        return MultiPoly.zero(P.char)
    if bideg is None:
        bideg = P.columns[support[0][0]]
    exps = [P.family.lam((bideg[0] - c[0], bideg[1] - c[1]))
            for c in (P.columns[k] for k, _ in support)]
    sa = max(0, -min(al for al, _ in exps))
    sb = max(0, -min(be for _, be in exps))
    pa, pb = P.family.params[:2]
    out = MultiPoly.zero(P.char)
    for (k, v), (al, be) in zip(support, exps):
        i, j = P.columns[k]
        out = out + MultiPoly.monomial(
            v, {pa: al + sa, pb: be + sb, "x": i, "y": j}, P.char)
    return out


class WallData:
    """Orbit data on a single ray: the wall subspace and its two sides."""

    __slots__ = ("ray", "rows", "minus", "plus")

    def __init__(self, ray, rows, minus, plus):
        self.ray = ray
        self.rows = rows
        self.minus = minus
        self.plus = plus

    def __repr__(self) -> str:
        return f"WallData({self.ray}, minus={self.minus}, plus={self.plus})"


def ray_limits(P: ParamIdeal, u: tuple[int, int]) -> WallData:
    """Limit family on the ray u and its two transverse monomial limits.

    `plus` is the limit just clockwise of the ray, `minus` just
    counterclockwise; both are guaranteed monomial when u is a fan ray.
    """
    wall = initial_rows(P, u)
    plus = _staircase_from(P, initial_rows(P, (u[1], -u[0]), wall))
    minus = _staircase_from(P, initial_rows(P, (-u[1], u[0]), wall))
    if plus is None or minus is None:
        raise DomainError(f"transverse limit along {u} is not monomial")
    rows = [attach_params(P, r) for r in wall]
    return WallData(u, rows, minus, plus)


def minor_exponent(P: ParamIdeal, cols: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Parameter exponents of the maximal minor on the given columns.

    Bihomogeneity forces every maximal minor to be an integer times a
    single parameter monomial, determined by the bidegree balance alone.
    Raises StructuralZero when the balance is not a monomial, which forces
    the minor to vanish identically.
    """
    cols = list(cols)
    if len(cols) != len(P.rows):
        raise DomainError(
            f"need {len(P.rows)} columns for a maximal minor, got {len(cols)}")
    known = set(P.columns)
    for c in cols:
        if tuple(c) not in known:
            raise DomainError(f"{c} is not a window column")
    d1 = sum(b[0] for b in P.row_bidegrees) - sum(c[0] for c in cols)
    d2 = sum(b[1] for b in P.row_bidegrees) - sum(c[1] for c in cols)
    al, be = P.family.lam((d1, d2))
    if al < 0 or be < 0:
        raise StructuralZero(
            f"minor on {cols} vanishes for bidegree reasons")
    return (al, be)
