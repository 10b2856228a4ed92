"""Exact linear algebra over integers, prime fields, and polynomial entries.

Three layers, all exact:

* integer matrices: fraction-free determinants and a canonical reduced
  echelon form with primitive rows (the unique positive-pivot integer
  rescaling of the rational RREF), plus the mod-p analogue;
* matrices with MultiPoly entries: Bareiss elimination, determinants,
  right kernels, with division-free back-substitution;
* polynomials viewed as vectors: a chosen tuple of "coordinate" variables
  indexes the columns, every other variable is treated as a transcendental
  parameter of the ground field. This is how one row span is reduced
  against another and how limits of one-parameter families are taken.

The column order for polynomial vectors is descending lex on the coordinate
exponents, so pivots sit on the largest monomials.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

from .errors import DomainError, RankError
from .poly import NVARS, VAR_INDEX, MultiPoly
from .scalars import Scalar

# -- integer matrices ---------------------------------------------------------


def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix, by Bareiss elimination."""
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise DomainError("matrix is not square")
    if n == 0:
        return 1
    a = [list(r) for r in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row = a[i]
            top = a[k]
            for j in range(k + 1, n):
                # exact by the Bareiss identity: entries are (k+1)-minors
                row[j] = (piv * row[j] - aik * top[j]) // prev
            row[k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def _strip_int_row(row: list[int]) -> None:
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for j, v in enumerate(row):
            row[j] = v // g


def rref_int(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Canonical reduced echelon form over the integers.

    Returns (rows, pivot_columns). Rows are primitive with positive pivot
    entries and zeros in every other pivot column: the unique integer
    rescaling of the rational RREF. Zero rows are dropped.
    """
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return [], []
    ncols = len(mat[0])
    if any(len(r) != ncols for r in mat):
        raise DomainError("ragged matrix")
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][col]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        _strip_int_row(mat[r])
        piv = mat[r][col]
        top = mat[r]
        for i in range(len(mat)):
            if i == r or not mat[i][col]:
                continue
            f = mat[i][col]
            g = gcd(piv, f)
            pa, fb = piv // g, f // g
            row = mat[i]
            for j in range(ncols):
                row[j] = pa * row[j] - fb * top[j]
            _strip_int_row(row)
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    out = []
    for row in mat[:r]:
        _strip_int_row(row)
        p = next(v for v in row if v)
        if p < 0:
            row = [-v for v in row]
        out.append(row)
    return out, pivots


def rank_int(rows: Sequence[Sequence[int]]) -> int:
    return len(rref_int(rows)[0])


def rref_mod_p(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced echelon form over GF(p) with unit pivots. Canonical."""
    mat = []
    for r in rows:
        rr = [v % p for v in r]
        if any(rr):
            mat.append(rr)
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][col]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = pow(mat[r][col], -1, p)
        mat[r] = [v * inv % p for v in mat[r]]
        top = mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                row = mat[i]
                for j in range(ncols):
                    row[j] = (row[j] - f * top[j]) % p
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    mat = [row for row in mat if any(row)]
    return mat, pivots


def initial_subspace(
    rows: Sequence[Sequence[int]], weights: Sequence[int], char: int = 0
) -> list[list[int]]:
    """Limit as t -> 0 of the row span after scaling column j by t**weights[j].

    The limit space is spanned by the lowest-weight initial forms of the
    span's elements. It is computed by one echelon reduction with columns
    sorted by ascending weight, truncating each row to its minimal weight
    class, then re-reducing in the original column order so the output is
    canonical. Every output row is weight-homogeneous.
    """
    live = [list(r) for r in rows if any(r)]
    if not live:
        return []
    ncols = len(live[0])
    if len(weights) != ncols:
        raise DomainError("one weight per column required")
    order = sorted(range(ncols), key=lambda j: (weights[j], j))
    back = [0] * ncols
    for pos, j in enumerate(order):
        back[j] = pos
    permuted = [[row[j] for j in order] for row in live]
    if char:
        reduced, pivots = rref_mod_p(permuted, char)
    else:
        reduced, pivots = rref_int(permuted)
    initial = []
    for row, pcol in zip(reduced, pivots):
        w0 = weights[order[pcol]]
        trimmed = [0] * ncols
        for pos, v in enumerate(row):
            j = order[pos]
            if v and weights[j] == w0:
                trimmed[j] = v
        initial.append(trimmed)
    if char:
        return rref_mod_p(initial, char)[0]
    return rref_int(initial)[0]


# -- Scalar matrices -----------------------------------------------------------


def rref_scalar(
    rows: Sequence[Sequence[Scalar]], char: int = 0
) -> tuple[list[list[Scalar]], list[int]]:
    """Field RREF with unit pivots over Scalar entries."""
    mat = [list(r) for r in rows if any(v.num for v in r)]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][col].num:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = mat[r][col].inv()
        mat[r] = [v * inv for v in mat[r]]
        top = mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][col].num:
                f = mat[i][col]
                mat[i] = [v - f * w for v, w in zip(mat[i], top)]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    mat = [row for row in mat if any(v.num for v in row)]
    return mat, pivots


# -- MultiPoly matrices ---------------------------------------------------------


def det_fraction_free(mat: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a square matrix of polynomials, by Bareiss elimination.

    All intermediate entries are genuine minors of the input, so the interim
    divisions are exact and coefficient growth stays polynomial.
    """
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise DomainError("matrix is not square")
    if n == 0:
        raise DomainError("empty matrix has no determinant here")
    char = mat[0][0].char
    zero = MultiPoly.zero(char)
    a = [list(r) for r in mat]
    sign = 1
    prev: MultiPoly | None = None
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return zero
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                v = piv * a[i][j] - aik * a[k][j]
                if prev is not None:
                    v = v.exact_div(prev)
                a[i][j] = v
            a[i][k] = zero
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def _bareiss_echelon(
    mat: list[list[MultiPoly]], char: int, pivot_width: int | None = None
) -> tuple[list[list[MultiPoly]], list[int]]:
    """Forward fraction-free echelon, in place. Returns (matrix, pivot cols).

    Pivots are only chosen among the first pivot_width columns; trailing
    columns (used for augmented bookkeeping) are transformed but never
    pivoted. Rows below the last pivot are identically zero on the pivot
    range. Row order: pivot rows first, then the rest.
    """
    if not mat:
        return mat, []
    ncols = len(mat[0])
    width = ncols if pivot_width is None else pivot_width
    pivots: list[int] = []
    r = 0
    prev: MultiPoly | None = None
    for col in range(width):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][col]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        piv = mat[r][col]
        top = mat[r]
        for i in range(r + 1, len(mat)):
            f = mat[i][col]
            row = mat[i]
            if not f:
                # the row must still be scaled by piv (and divided by the
                # previous pivot) to stay on the Bareiss ladder; otherwise a
                # later pivot drawn from it breaks exact division
                for j in range(col + 1, ncols):
                    if row[j]:
                        v = piv * row[j]
                        if prev is not None:
                            v = v.exact_div(prev)
                        row[j] = v
                continue
            for j in range(col + 1, ncols):
                v = piv * row[j] - f * top[j]
                if prev is not None and v:
                    v = v.exact_div(prev)
                elif prev is not None:
                    v = v
                row[j] = v
            row[col] = MultiPoly.zero(char)
        pivots.append(col)
        prev = piv
        r += 1
        if r == len(mat):
            break
    return mat, pivots


# -- polynomials as vectors -------------------------------------------------


def _coord_idx(coords: Sequence[str]) -> tuple[int, ...]:
    idx = []
    for name in coords:
        i = VAR_INDEX.get(name)
        if i is None:
            raise DomainError(f"unknown variable {name!r}")
        if i == 0:
            raise DomainError("t cannot be a coordinate variable")
        idx.append(i)
    if len(set(idx)) != len(idx):
        raise DomainError("repeated coordinate variable")
    return tuple(idx)


def _vectorize(
    polys: Sequence[MultiPoly], cidx: tuple[int, ...], char: int
) -> tuple[list[tuple], list[list[MultiPoly]]]:
    """Split polynomials into (sorted column keys, rows of parameter entries).

    Columns are the coordinate-variable monomials that occur, in descending
    lex order; entries are polynomials in the remaining variables.
    """
    split: list[dict[tuple, dict]] = []
    colset = set()
    for p in polys:
        by_key: dict[tuple, dict] = {}
        for e, c in p.terms.items():
            key = tuple(e[i] for i in cidx)
            rest = list(e)
            for i in cidx:
                rest[i] = 0
            by_key.setdefault(key, {})[tuple(rest)] = c
        split.append(by_key)
        colset.update(by_key)
    columns = sorted(colset, reverse=True)
    pos = {k: i for i, k in enumerate(columns)}
    zero = MultiPoly.zero(char)
    rows = []
    for by_key in split:
        row = [zero] * len(columns)
        for key, terms in by_key.items():
            row[pos[key]] = MultiPoly(terms, char)
        rows.append(row)
    return columns, rows


def _unvectorize(
    row: Sequence[MultiPoly], columns: Sequence[tuple], cidx: tuple[int, ...], char: int
) -> MultiPoly:
    total = MultiPoly.zero(char)
    for entry, key in zip(row, columns):
        if not entry:
            continue
        exps = [0] * NVARS
        for i, e in zip(cidx, key):
            exps[i] = e
        total = total + entry.mul_monomial(tuple(exps))
    return total


def _strip_poly_row(row: list[MultiPoly]) -> None:
    # divide an integer-coefficient row by its overall integer content
    g = 0
    for p in row:
        for c in p.terms.values():
            if c.den != 1:
                return
            g = gcd(g, c.num)
        if g == 1:
            return
    if g > 1:
        for i, p in enumerate(row):
            if p:
                row[i] = p / Scalar(g)


def _all_constant(rows: Sequence[Sequence[MultiPoly]]) -> bool:
    return all(p.is_constant() for row in rows for p in row)


def reduce_rows(
    polys: Sequence[MultiPoly], coords: Sequence[str] = ("x", "y")
) -> list[MultiPoly]:
    """Reduced echelon basis of the span of the given polynomials.

    The span is taken over the field of rational functions in the
    non-coordinate variables; coordinate monomials index the columns. When
    no genuine parameters occur the result is the canonical primitive RREF
    basis; with parameters it is echelon with cleared pivot columns, unique
    up to polynomial content of each row.
    """
    cidx = _coord_idx(coords)
    live = [p.normalized() for p in polys if p]
    if not live:
        return []
    char = live[0].char
    for p in live:
        if p.char != char:
            raise DomainError("mixed characteristics")
        rng = p.t_range()
        if rng is not None and (rng[0] != 0 or rng[1] != 0):
            raise DomainError("t is not allowed in row reduction")
    columns, rows = _vectorize(live, cidx, char)
    if _all_constant(rows):
        smat = [[p.constant_value() for p in row] for row in rows]
        red, _ = rref_scalar(smat, char)
        out = []
        for srow in red:
            prow = [MultiPoly.constant(v, char) for v in srow]
            out.append(_unvectorize(prow, columns, cidx, char).normalized())
        return out
    mat, pivots = _bareiss_echelon(rows, char)
    mat = mat[: len(pivots)]
    # clear above the pivots by cross-multiplication, stripping content as
    # we go; canonical scaling is restored per row at the end
    for r in range(len(pivots) - 1, 0, -1):
        col = pivots[r]
        piv = mat[r][col]
        for i in range(r):
            f = mat[i][col]
            if not f:
                continue
            mat[i] = [piv * v - f * w for v, w in zip(mat[i], mat[r])]
            _strip_poly_row(mat[i])
    return [_unvectorize(row, columns, cidx, char).normalized() for row in mat]


def span_contains(
    basis: Sequence[MultiPoly], p: MultiPoly, coords: Sequence[str] = ("x", "y")
) -> bool:
    """Whether p lies in the span of basis over the parameter field."""
    cidx = _coord_idx(coords)
    live = [q for q in basis if q]
    if not p:
        return True
    if not live:
        return False
    char = p.char
    columns, rows = _vectorize(live + [p], cidx, char)
    target = rows.pop()
    mat, pivots = _bareiss_echelon(rows, char)
    for r, col in enumerate(pivots):
        if not target[col]:
            continue
        piv = mat[r][col]
        f = target[col]
        target = [piv * v - f * w for v, w in zip(target, mat[r])]
        _strip_poly_row(target)
    return not any(target)


def span_equal(
    a: Sequence[MultiPoly], b: Sequence[MultiPoly], coords: Sequence[str] = ("x", "y")
) -> bool:
    """Whether two families span the same subspace over the parameter field."""
    ra = reduce_rows(a, coords)
    rb = reduce_rows(b, coords)
    if len(ra) != len(rb):
        return False
    return all(span_contains(rb, p, coords) for p in ra)


def row_dependency(
    polys: Sequence[MultiPoly], coords: Sequence[str] = ("x", "y")
) -> list[MultiPoly] | None:
    """A nontrivial linear dependency over the parameter field, or None.

    Returns coefficients lam (polynomials in the parameters) with
    sum(lam[i] * polys[i]) == 0, not all zero. Zero input rows yield the
    obvious dependency.
    """
    if not polys:
        return None
    char = polys[0].char
    one = MultiPoly.constant(1, char)
    zero = MultiPoly.zero(char)
    for i, p in enumerate(polys):
        if not p:
            lam = [zero] * len(polys)
            lam[i] = one
            return lam
    cidx = _coord_idx(coords)
    columns, rows = _vectorize(polys, cidx, char)
    width = len(columns)
    if _all_constant(rows):
        smat = []
        for i, row in enumerate(rows):
            aug = [p.constant_value() for p in row]
            aug += [Scalar(1 if j == i else 0, 1, char) for j in range(len(rows))]
            smat.append(aug)
        red, pivots = rref_scalar(smat, char)
        for srow, col in zip(red, pivots):
            if col >= width:
                return [MultiPoly.constant(v, char) for v in srow[width:]]
        return None
    for i, row in enumerate(rows):
        row.extend(one if j == i else zero for j in range(len(rows)))
    mat, pivots = _bareiss_echelon(rows, char, pivot_width=width)
    if len(pivots) == len(mat):
        return None
    lam = mat[len(pivots)][width:]
    return list(lam)


def t_limit_basis(
    rows: Sequence[MultiPoly], coords: Sequence[str] = ("x", "y")
) -> list[MultiPoly]:
    """Limit as t -> 0 of the constant-rank family spanned by the rows.

    The rows span a subspace over k(params)(t), with coordinate monomials
    as columns; the limit is a subspace of the t-free polynomials. Raises
    RankError when the rows are dependent over k(params)(t), since then the
    family does not have constant rank len(rows).
    """
    work = list(rows)
    if not work:
        return []
    char = work[0].char
    if any(not r for r in work):
        raise RankError("family not of constant rank: zero row")
    lows: list[int] = []
    cands: list[MultiPoly] = []
    total_low = 0
    budget = 0
    for r in work:
        lo, hi = r.t_range()
        lows.append(lo)
        cands.append(r.coeff_in_t(lo))
        total_low += lo
        budget += hi
    while True:
        lam = row_dependency(cands, coords)
        if lam is None:
            break
        support = [i for i, v in enumerate(lam) if v]
        m = max(lows[i] for i in support)
        j = next(i for i in support if lows[i] == m)
        new = MultiPoly.zero(char)
        for i in support:
            new = new + lam[i] * work[i].shift_t(m - lows[i])
        if not new:
            raise RankError("family not of constant rank")
        work[j] = new
        lo = new.t_range()[0]
        total_low += lo - lows[j]
        lows[j] = lo
        cands[j] = new.coeff_in_t(lo)
        if total_low > budget:
            # the sum of trailing t-degrees of an independent family never
            # exceeds the t-degree of a maximal minor, which is at most the
            # sum of the initial leading t-degrees
            raise RankError("family not of constant rank")
    return reduce_rows(cands, coords)


def right_kernel(mat: Sequence[Sequence[MultiPoly]]) -> list[list[MultiPoly]]:
    """Basis of the right kernel of a matrix of polynomials.

    Returned vectors have polynomial entries (denominators cleared by the
    pivot product) and stripped integer content.
    """
    if not mat:
        return []
    char = mat[0][0].char
    ncols = len(mat[0])
    zero = MultiPoly.zero(char)
    work = [list(r) for r in mat]
    ech, pivots = _bareiss_echelon(work, char)
    ech = ech[: len(pivots)]
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    pivprod = MultiPoly.constant(1, char)
    for r, c in enumerate(pivots):
        pivprod = pivprod * ech[r][c]
    # everything below the last pivot level is a spurious common factor: the
    # last pivot is the full rank-size minor, earlier ones stack up under the
    # fraction-free scaling and divide out of every entry
    extra = MultiPoly.constant(1, char)
    for r in range(len(pivots) - 1):
        extra = extra * ech[r][pivots[r]]
    kernel = []
    for f in free:
        v: list[MultiPoly] = [zero] * ncols
        v[f] = pivprod
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            s = ech[r][f] * v[f]
            for k in range(r + 1, len(pivots)):
                ck = pivots[k]
                if ech[r][ck] and v[ck]:
                    s = s + ech[r][ck] * v[ck]
            v[c] = (-s).exact_div(ech[r][c]) if s else zero
        if len(pivots) > 1:
            v = [e.exact_div(extra) if e else e for e in v]
        _strip_poly_row(v)
        kernel.append(v)
    return kernel
