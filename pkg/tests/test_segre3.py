import json
import random
from itertools import combinations

import pytest

from hilbfan.errors import DomainError
from hilbfan.linalg import det_fraction_free, reduce_rows, span_contains, span_equal
from hilbfan.orbit import G41, G51
from hilbfan.poly import MultiPoly
from hilbfan.segre3 import (
    ABC,
    Facet,
    SupportPicture,
    coordinate_span,
    hull3_faces,
    minor_span,
    support_picture,
    window_matrix,
)
from hilbfan.staircase import Staircase


def I(*steps):
    return Staircase.from_steps(steps)


def var(name):
    return MultiPoly.variable(name)


Y_FACTORS = (I(3), I(4), I(1, 4), I(5), I(1, 5))


def frozen_sporadic():
    a, b, c = var("a"), var("b"), var("c")
    core = (a * c - b * b) * (a * c - (b * b).scale(2))
    return [(a ** 5 * b * core).normalized(),
            (a ** 2 * b ** 2 * core).normalized()]


@pytest.fixture(scope="module")
def y_span():
    return coordinate_span(list(Y_FACTORS))


@pytest.fixture(scope="module")
def y_picture(y_span):
    return support_picture(y_span)


class TestWindowMatrix:
    def test_shapes(self):
        for steps, shape in (((3,), (3, 4)), ((4,), (6, 8)),
                             ((1, 4), (15, 17)), ((5,), (10, 13)),
                             ((1, 5), (21, 24))):
            rows, cols = window_matrix(I(*steps))
            assert (len(rows), len(cols)) == shape
            assert all(len(r) == len(cols) for r in rows)

    def test_monomial_rows_have_unit_pivot(self):
        rows, cols = window_matrix(I(1, 1))
        col_of = {m: k for k, m in enumerate(cols)}
        # the y^2 row is untouched by the substitution
        y2 = rows[0]
        assert y2[col_of[(0, 2)]] == MultiPoly.constant(1)
        assert sum(1 for e in y2 if e) == 1


class TestMinorSpan:
    def test_matches_direct_determinants(self):
        # oracle: enumerate every maximal minor directly
        for steps in ((3,), (4,), (1, 4)):
            sc = I(*steps)
            mat, cols = window_matrix(sc)
            r, n = len(mat), len(cols)
            direct = [det_fraction_free([[mat[i][j] for j in S]
                                         for i in range(r)])
                      for S in combinations(range(n), r)]
            direct = [p for p in direct if p]
            assert span_equal(direct, minor_span(sc), ABC)

    def test_invariant_ideal_spans_one(self):
        assert span_equal(minor_span(I(1, 1)), [MultiPoly.constant(1)], ABC)

    def test_first_alignment_factor(self):
        assert span_equal(minor_span(I(3)), [MultiPoly.constant(1), var("a")],
                          ABC)

    def test_factor_dimensions(self):
        dims = {(3,): 2, (4,): 4, (1, 4): 5, (5,): 10, (1, 5): 13}
        for steps, dim in dims.items():
            assert len(minor_span(I(*steps))) == dim

    def test_two_parameter_family_variant(self):
        basis = minor_span(I(4), G41)
        assert all(p.degree("c") == 0 for p in basis)
        assert span_contains(basis, MultiPoly.constant(1), ("a", "b"))


class TestCoordinateSpan:
    def test_single_staircase_argument(self):
        assert span_equal(coordinate_span(I(3)), coordinate_span([I(3)]), ABC)

    def test_invariant_ideal(self):
        assert span_equal(coordinate_span([I(1, 1)]),
                          [MultiPoly.constant(1)], ABC)

    def test_one_step_factor(self):
        assert span_equal(coordinate_span([I(3)]),
                          [MultiPoly.constant(1), var("a")], ABC)

    def test_five_factor_dimension(self, y_span):
        assert len(y_span) == 132

    def test_contains_factor_products(self, y_span):
        rng = random.Random(40)
        bases = [minor_span(sc) for sc in Y_FACTORS]
        for _ in range(5):
            prod = MultiPoly.constant(1)
            for basis in bases:
                prod = prod * rng.choice(basis)
            assert span_contains(y_span, prod, ABC)

    def test_oversized_measuring_sequence(self):
        with pytest.raises(DomainError, match="exceeds family"):
            coordinate_span([I(6)])
        # (x^2, y^2) measures (2, 2): too wide in the second slot
        with pytest.raises(DomainError, match="exceeds family"):
            coordinate_span([I(3), I(2, 0)])

    def test_empty_input(self):
        with pytest.raises(DomainError, match="at least one"):
            coordinate_span([])


class TestSupportPicture:
    def test_two_point_span(self):
        picture = support_picture(coordinate_span([I(3)]))
        assert picture.points == {(0, 0, 0), (1, 0, 0)}
        assert all(picture.monomial_flags.values())
        assert picture.sporadic == []

    def test_five_factor_counts(self, y_span, y_picture):
        flags = y_picture.monomial_flags
        assert len(y_picture.points) == 136
        assert sum(flags.values()) == 130
        assert len(y_picture.sporadic) == 2
        assert len(y_span) == sum(flags.values()) + len(y_picture.sporadic)

    def test_five_factor_open_points(self, y_picture):
        holes = {pt for pt, ok in y_picture.monomial_flags.items() if not ok}
        assert holes == {(7, 1, 2), (4, 2, 2), (6, 3, 1), (3, 4, 1),
                         (5, 5, 0), (2, 6, 0)}

    def test_five_factor_sporadic(self, y_picture):
        assert sorted(map(str, y_picture.sporadic)) == sorted(
            map(str, frozen_sporadic()))

    def test_sporadic_supported_on_open_points(self, y_picture):
        holes = {pt for pt, ok in y_picture.monomial_flags.items() if not ok}
        covered = set()
        for p in y_picture.sporadic:
            supp = {(e[1], e[2], e[3]) for e in p.terms}
            assert supp <= holes
            covered |= supp
        assert covered == holes

    def test_to_dict_schema(self, y_picture):
        data = y_picture.to_dict()
        assert set(data) == {"points", "open", "sporadic"}
        assert len(data["points"]) == 136
        assert sorted(data["open"]) == data["open"]
        assert json.loads(json.dumps(data)) == data

    def test_membership_matches_reduction_probe(self, y_span, y_picture):
        # spot-check the one-term-row shortcut against span_contains
        rng = random.Random(41)
        pts = sorted(y_picture.points)
        for pt in rng.sample(pts, 8):
            mono = MultiPoly.monomial(1, {"a": pt[0], "b": pt[1], "c": pt[2]})
            assert span_contains(y_span, mono, ABC) == \
                y_picture.monomial_flags[pt]


class TestSlicesAndSpecialization:
    def test_c_zero_slice_is_two_parameter_span(self, y_span):
        slice0 = []
        for p in y_span:
            q = MultiPoly({e: c for e, c in p.terms.items() if e[3] == 0})
            if q:
                slice0.append(q)
        g41 = [MultiPoly.constant(1)]
        for sc in Y_FACTORS:
            basis = minor_span(sc, G41)
            g41 = reduce_rows([s * m for s in g41 for m in basis], ("a", "b"))
        assert len(g41) == 69
        assert span_equal(slice0, g41, ("a", "b"))

    def test_specialization_at_origin(self, y_span):
        values = [p.substitute({"a": 0, "b": 0, "c": 0}) for p in y_span]
        assert len(values) == 132
        nonzero = [v for v in values if v]
        # only the constant row survives at the origin
        assert nonzero == [MultiPoly.constant(1)]

    def test_specialization_at_random_point(self, y_span):
        rng = random.Random(42)
        a, b, c = (rng.randint(1, 9) for _ in range(3))
        point = {"a": a, "b": b, "c": c}
        values = [p.substitute(point) for p in y_span]
        assert len(values) == 132
        assert all(v.is_constant() for v in values)
        for p, v in zip(y_span, values):
            single = p.single_term()
            if single is not None:
                e = single[0]
                expected = single[1] * a ** e[1] * b ** e[2] * c ** e[3]
                assert v.constant_value() == expected


class TestHull3Faces:
    def test_tetrahedron(self):
        faces = hull3_faces([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
        assert len(faces) == 4
        assert all(isinstance(f, Facet) and len(f.points) == 3 for f in faces)

    def test_cube(self):
        cube = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
        faces = hull3_faces(cube)
        assert len(faces) == 6
        assert all(len(f.points) == 4 for f in faces)

    def test_interior_and_face_points_ignored(self):
        cube = [(x, y, z) for x in (0, 2) for y in (0, 2) for z in (0, 2)]
        faces = hull3_faces(cube + [(1, 1, 1), (1, 1, 0)])
        assert len(faces) == 6
        bottom = next(f for f in faces if f.normal == (0, 0, -1))
        assert (1, 1, 0) in bottom.points

    def test_spiked_cube(self):
        cube = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
        assert len(hull3_faces(cube + [(1, 1, 2)])) == 7

    def test_outward_orientation(self):
        cube = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
        for f in hull3_faces(cube + [(1, 1, 2)]):
            n, off = f.normal, f.offset
            assert all(n[0] * p[0] + n[1] * p[1] + n[2] * p[2] <= off
                       for p in cube)

    def test_planar_input_names_plane(self):
        square = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]
        with pytest.raises(DomainError, match=r"plane \(0, 0, 1\)"):
            hull3_faces(square)

    def test_collinear_input_names_line(self):
        with pytest.raises(DomainError, match="line through"):
            hull3_faces([(i, i, i) for i in range(5)])

    def test_repeated_point_names_point(self):
        with pytest.raises(DomainError, match="single point"):
            hull3_faces([(1, 2, 3)] * 6)

    def test_empty_input(self):
        with pytest.raises(DomainError, match="no points"):
            hull3_faces([])

    def test_five_factor_hull(self, y_picture):
        faces = hull3_faces(y_picture.points)
        table = [(f.normal, f.offset, len(f.points)) for f in faces]
        assert table == [
            ((-1, 0, 0), 0, 15),
            ((0, -1, 0), 0, 39),
            ((0, 0, -1), 0, 69),
            ((0, 0, 1), 2, 23),
            ((0, 1, 2), 6, 12),
            ((1, 2, 3), 15, 12),
            ((1, 3, 5), 20, 6),
        ]
        holes = {pt for pt, ok in y_picture.monomial_flags.items() if not ok}
        circle_face = next(f for f in faces if f.normal == (1, 3, 5))
        assert set(circle_face.points) == holes
        for f in faces:
            n, off = f.normal, f.offset
            assert all(n[0] * p[0] + n[1] * p[1] + n[2] * p[2] <= off
                       for p in y_picture.points)


class TestPictureRepr:
    def test_repr_and_slots(self, y_picture):
        text = repr(y_picture)
        assert "136 points" in text and "6 open" in text and "2 sporadic" in text
        assert isinstance(y_picture, SupportPicture)
        with pytest.raises(AttributeError):
            y_picture.extra = 1


class TestVerifyHook:
    def test_figure3_report(self):
        from hilbfan.verify import verify_figure3

        report = verify_figure3()
        assert report.status == "pass"
        assert report.claim_id == "figure3"
        assert report.parameters["factors"] == [[3], [4], [1, 4], [5], [1, 5]]
