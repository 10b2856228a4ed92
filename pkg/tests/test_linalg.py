"""Linear algebra kernel against Fraction-arithmetic oracles."""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from hilbfan.errors import RankError
from hilbfan.linalg import (
    det_fraction_free,
    det_int,
    initial_subspace,
    rank_int,
    reduce_rows,
    rref_int,
    rref_mod_p,
    rref_scalar,
    right_kernel,
    row_dependency,
    span_contains,
    span_equal,
    t_limit_basis,
)
from hilbfan.poly import MultiPoly
from hilbfan.scalars import Scalar

X = MultiPoly.variable("x")
Y = MultiPoly.variable("y")
A = MultiPoly.variable("a")
B = MultiPoly.variable("b")
T = MultiPoly.variable("t")


def frac_det(mat):
    """Cofactor-expansion determinant over Fractions; the slow oracle."""
    n = len(mat)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(mat[0][0])
    total = Fraction(0)
    for j in range(n):
        if mat[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        total += (-1) ** j * Fraction(mat[0][j]) * frac_det(minor)
    return total


def frac_rref(rows):
    """Plain RREF over Fractions, the oracle for canonical forms."""
    mat = [[Fraction(v) for v in row] for row in rows]
    mat = [row for row in mat if any(row)]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [v - f * w for v, w in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return [row for row in mat if any(row)], pivots


def rand_mat(rng, n, m, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]


def test_det_int_known():
    assert det_int([[1, 2], [3, 4]]) == -2
    assert det_int([[2, 0, 0], [0, 3, 0], [0, 0, 5]]) == 30
    assert det_int([[1, 2], [2, 4]]) == 0
    assert det_int([[0, 1], [1, 0]]) == -1
    assert det_int([]) == 1


def test_det_int_random_vs_cofactor():
    rng = random.Random(101)
    for _ in range(150):
        n = rng.randint(1, 5)
        m = rand_mat(rng, n, n)
        assert det_int(m) == frac_det(m)


def test_det_fraction_free_symbolic():
    d = det_fraction_free([[A, B], [X, Y]])
    assert d == A * Y - B * X
    # 3x3 with a zero pivot forcing a swap
    zero = MultiPoly.zero()
    one = MultiPoly.constant(1)
    d = det_fraction_free([[zero, one, zero], [one, zero, zero], [zero, zero, one]])
    assert d == MultiPoly.constant(-1)


def test_det_fraction_free_random_evaluation():
    from test_poly import ev, rand_point, rand_poly

    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 4)
        mat = [[rand_poly(rng, nterms=2, maxexp=2) for _ in range(n)] for _ in range(n)]
        pt = rand_point(rng)
        lhs = ev(det_fraction_free(mat), pt)
        rhs = frac_det([[ev(p, pt) for p in row] for row in mat])
        assert lhs == rhs


def test_rref_int_canonical():
    rng = random.Random(303)
    for _ in range(80):
        n, m = rng.randint(1, 5), rng.randint(1, 7)
        mat = rand_mat(rng, n, m, -5, 5)
        red, pivots = rref_int(mat)
        # canonical shape: primitive rows, positive pivots, clean pivot columns
        for r, col in zip(red, pivots):
            assert r[col] > 0
            from math import gcd

            g = 0
            for v in r:
                g = gcd(g, v)
            assert g == 1
            for other in red:
                if other is not r:
                    assert other[col] == 0
        # matches the Fraction RREF after clearing denominators
        fred, fpiv = frac_rref(mat)
        assert fpiv == pivots
        for r, fr in zip(red, fred):
            scaled = [Fraction(v) for v in r]
            piv = next(v for v in scaled if v)
            assert [v / piv for v in scaled] == fr
        # invariance under row operations
        mixed = [row[:] for row in mat]
        for _ in range(6):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                k = rng.randint(-3, 3)
                mixed[i] = [v + k * w for v, w in zip(mixed[i], mixed[j])]
        red2, piv2 = rref_int(mixed)
        assert red2 == red and piv2 == pivots
        assert rref_int(red)[0] == red


def test_rref_mod_p():
    red, piv = rref_mod_p([[2, 4], [1, 2]], 2)
    assert red == [[1, 0]] and piv == [0]
    rng = random.Random(5)
    for p in (2, 3, 5):
        for _ in range(40):
            mat = rand_mat(rng, 3, 4)
            red, piv = rref_mod_p(mat, p)
            assert rref_mod_p(red, p)[0] == red
            scaled = [[(v * 7) for v in row] for row in mat]
            if 7 % p:
                assert rref_mod_p(scaled, p)[0] == red
            for r, col in zip(red, piv):
                assert r[col] == 1
                for other in red:
                    if other is not r:
                        assert other[col] == 0


def test_rref_scalar_matches_fraction_oracle():
    rng = random.Random(77)
    for _ in range(60):
        n, m = rng.randint(1, 4), rng.randint(1, 6)
        mat = rand_mat(rng, n, m, -6, 6)
        red, piv = rref_scalar([[Scalar(v) for v in row] for row in mat])
        fred, fpiv = frac_rref(mat)
        assert piv == fpiv
        assert [[Fraction(s.num, s.den) for s in row] for row in red] == fred


def int_rows_to_polys(mat, weights=None):
    # column j becomes the monomial y**j, optionally scaled by t**weights[j]
    out = []
    for row in mat:
        p = MultiPoly.zero()
        for j, v in enumerate(row):
            if v:
                term = MultiPoly.monomial(v, {"y": j})
                if weights is not None:
                    term = term.shift_t(weights[j])
                p = p + term
        out.append(p)
    return out


def test_initial_subspace_hand_cases():
    assert initial_subspace([[1, 1]], [0, 1]) == [[1, 0]]
    assert initial_subspace([[1, 1]], [1, 0]) == [[0, 1]]
    assert initial_subspace([[1, 1], [0, 1]], [0, 1]) == [[1, 0], [0, 1]]
    assert initial_subspace([[2, 4]], [3, 3]) == [[1, 2]]
    assert initial_subspace([], [0, 0]) == []
    assert initial_subspace([[1, 1], [1, 1]], [0, 1]) == [[1, 0]]


def test_initial_subspace_matches_t_limit():
    rng = random.Random(271)
    for _ in range(50):
        n, m = rng.randint(1, 3), rng.randint(2, 5)
        mat = rand_mat(rng, n, m, -3, 3)
        if rank_int(mat) < n:
            continue
        w = [rng.randint(-3, 3) for _ in range(m)]
        via_limit = t_limit_basis(int_rows_to_polys(mat, w))
        direct = int_rows_to_polys(initial_subspace(mat, w))
        assert span_equal(via_limit, direct)
        assert len(via_limit) == len(direct) == n


def test_initial_subspace_rows_weight_homogeneous():
    rng = random.Random(99)
    for _ in range(60):
        n, m = rng.randint(1, 4), rng.randint(2, 6)
        mat = rand_mat(rng, n, m, -4, 4)
        w = [rng.randint(0, 3) for _ in range(m)]
        for row in initial_subspace(mat, w):
            seen = {w[j] for j, v in enumerate(row) if v}
            assert len(seen) <= 1


def test_t_limit_basis_cases():
    assert t_limit_basis([X + T * Y, Y]) == [X, Y]
    assert t_limit_basis([X + T * Y]) == [X]
    assert t_limit_basis([X + T * Y, X - T * Y]) == [X, Y]
    assert t_limit_basis([]) == []
    with pytest.raises(RankError):
        t_limit_basis([X, T * X])
    with pytest.raises(RankError):
        t_limit_basis([X, MultiPoly.zero()])
    with pytest.raises(RankError):
        t_limit_basis([X + T * Y, X + T * Y])
    # parameters in the ground field
    assert span_equal(t_limit_basis([A * X + T * Y, B * X]), [X, Y], ("x", "y"))
    assert t_limit_basis([X + T * A * Y, Y]) == [X, Y]
    # char 2
    x2 = MultiPoly.variable("x", char=2)
    y2 = MultiPoly.variable("y", char=2)
    t2 = MultiPoly.variable("t", char=2)
    assert t_limit_basis([x2 + t2 * y2, y2]) == [x2, y2]
    with pytest.raises(RankError):
        t_limit_basis([x2 + t2 * y2, x2 + t2 * y2])


def test_t_limit_basis_iterates():
    # candidates collide repeatedly before the limit stabilizes
    rows = [X + T * Y, X + (T ** 2) * Y]
    # span over k(t) is 2-dimensional, limit must be the full (x, y) plane
    assert t_limit_basis(rows) == [X, Y]
    rows = [X + T * Y + (T ** 2) * A, X + T * Y]
    assert t_limit_basis(rows) == [X, A]


def test_row_dependency():
    rng = random.Random(13)
    zero = MultiPoly.zero()
    # independent rows give None
    assert row_dependency([X, Y]) is None
    assert row_dependency([A * X + Y, Y]) is None
    # constructed dependencies are found and verified
    for _ in range(40):
        base = [X + rng.randint(-3, 3) * Y, Y * rng.randint(1, 4)]
        c1, c2 = rng.randint(-3, 3), rng.randint(-3, 3)
        dep_row = base[0] * c1 + base[1] * c2
        lam = row_dependency(base + [dep_row])
        assert lam is not None
        total = zero
        for l, p in zip(lam, base + [dep_row]):
            total = total + l * p
        assert not total
    # zero row
    lam = row_dependency([X, zero])
    assert lam is not None and lam[1] and not lam[0]
    # dependency that needs polynomial coefficients
    lam = row_dependency([A * X, B * X])
    assert lam is not None
    assert not (lam[0] * A * X + lam[1] * B * X)
    # regression: a later pivot drawn from a row with a zero in the first
    # pivot column must not derail the fraction-free division ladder
    def bxy(k, i):
        return MultiPoly.monomial(1, {"b": k, "x": i}, 2)

    rows = [bxy(3, 3), bxy(2, 3), bxy(1, 3), bxy(0, 3), bxy(2, 2), bxy(0, 2)]
    lam = row_dependency(rows)
    assert lam is not None
    total = MultiPoly.zero(2)
    for l, p in zip(lam, rows):
        total = total + l * p
    assert not total and any(lam)


def test_right_kernel():
    rng = random.Random(21)
    for _ in range(40):
        n, m = rng.randint(1, 3), rng.randint(2, 5)
        mat = rand_mat(rng, n, m, -4, 4)
        pmat = [[MultiPoly.constant(v) for v in row] for row in mat]
        kern = right_kernel(pmat)
        assert len(kern) == m - rank_int(mat)
        for v in kern:
            assert any(v)
            for row in pmat:
                s = MultiPoly.zero()
                for e, ke in zip(row, v):
                    s = s + e * ke
                assert not s
    kern = right_kernel([[A, B, MultiPoly.zero()], [MultiPoly.zero(), A, B]])
    assert len(kern) == 1
    (v,) = kern
    assert not (A * v[0] + B * v[1]) and not (A * v[1] + B * v[2])
    assert v[0].normalized() == (B * B).normalized()


def test_span_contains_and_equal():
    assert span_contains([X + Y, X], Y)
    assert span_contains([A * X + Y, Y], X)
    assert not span_contains([X + Y], X)
    assert not span_contains([], X)
    assert span_contains([X], MultiPoly.zero())
    assert span_equal([X + Y, X - Y], [X, Y])
    assert not span_equal([X + Y], [X, Y])
    assert span_equal([A * X], [X])
    assert not span_equal([A * X + Y], [X])


def test_reduce_rows_canonical_without_parameters():
    rng = random.Random(55)
    for _ in range(50):
        polys = []
        for _ in range(rng.randint(1, 4)):
            p = MultiPoly.zero()
            for _ in range(rng.randint(1, 4)):
                p = p + MultiPoly.monomial(
                    rng.randint(-4, 4), {"x": rng.randint(0, 2), "y": rng.randint(0, 2)}
                )
            polys.append(p)
        basis = reduce_rows(polys)
        # shuffled random integer combinations give the identical basis
        combos = []
        for _ in range(len(polys) + 1):
            q = MultiPoly.zero()
            for p in polys:
                q = q + rng.randint(-3, 3) * p
            combos.append(q)
        combos.extend(polys)
        rng.shuffle(combos)
        assert reduce_rows(combos) == basis


def test_reduce_rows_with_parameters():
    rows = reduce_rows([A * X + B * Y, B * Y])
    assert span_equal(rows, [A * X, B * Y])
    # coordinates can be parameters instead: the K-span of (a, b)-polynomials
    polys = [A + B, A - B, A * B]
    red = reduce_rows(polys, coords=("a", "b"))
    assert len(red) == 3
    red2 = reduce_rows([A, B, A * B + A], coords=("a", "b"))
    assert red == red2
