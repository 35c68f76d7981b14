import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poincare.geometry import GeometryError, Isometry, Point, Space, dist
from poincare.polyhedra import (
    AffineChart,
    EmptyPolyhedronError,
    HalfSpace,
    NotThickError,
    Polyhedron,
    bisector,
    chart_radius,
    essential_halfspaces,
    is_thick,
    relative_interior_point,
    side_test,
)

E2 = Space("euclidean", 2)
E3 = Space("euclidean", 3)
H2 = Space("hyperbolic", 2)
S2 = Space("spherical", 2)


def unit_square():
    return [HalfSpace.from_normal(E2, [1, 0], 0.5), HalfSpace.from_normal(E2, [-1, 0], 0.5),
            HalfSpace.from_normal(E2, [0, 1], 0.5), HalfSpace.from_normal(E2, [0, -1], 0.5)]


class TestHalfSpace:
    def test_json_round_trip(self):
        z = HalfSpace.from_normal(E2, [3.0, 4.0], 2.0)
        back = HalfSpace.from_json(E2, z.to_json())
        assert np.allclose(back.row, z.row)
        # normalized: value is the signed Euclidean distance
        assert z.value(np.array([0.0, 0.0, 1.0])) == pytest.approx(-0.4)

    def test_hyperbolic_offset_rejected(self):
        with pytest.raises(GeometryError):
            HalfSpace.from_normal(H2, [1.0, 0.0, 0.0], 1.0)

    def test_wrong_length(self):
        with pytest.raises(GeometryError):
            HalfSpace(E2, [1.0, 0.0])

    def test_complement_flips_side(self):
        z = HalfSpace.from_normal(E2, [1, 0], 1.0)
        x = Point(E2, [0.0, 0.0])
        assert side_test(z, x) == "interior"
        assert side_test(z.complement(), x) == "outside"
        assert side_test(z, Point(E2, [1.0, 5.0])) == "boundary"

    def test_transform_moves_boundary(self):
        z = HalfSpace.from_normal(E2, [1, 0], 0.0)
        g = Isometry.translation(E2, [2.0, 0.0])
        assert side_test(z.transform(g), Point(E2, [2.0, 3.0])) == "boundary"
        assert side_test(z.transform(g), Point(E2, [1.0, 0.0])) == "interior"

    def test_through_points_in_half_plane(self):
        z = HalfSpace.through(H2, [Point(H2, [1, 0.5]), Point(H2, [-1, 0.5])], Point(H2, [0, 2]))
        # the geodesic through -1+i/2 and 1+i/2 is the circle |z|^2 = 5/4
        r = np.sqrt(1.25)
        assert side_test(z, Point(H2, [0, r])) == "boundary"
        assert side_test(z, Point(H2, [0, 2])) == "interior"
        assert side_test(z, Point(H2, [0, 1])) == "outside"


class TestBisector:
    def test_hyperbolic_vertical_pair(self):
        z = bisector(Point(H2, [0, 1]), Point(H2, [0, 4]))
        for th in np.linspace(0.2, np.pi - 0.2, 7):
            assert side_test(z, Point(H2, [2 * np.cos(th), 2 * np.sin(th)]), tol=1e-9) == "boundary"
        assert side_test(z, Point(H2, [0, 1])) == "interior"

    def test_coincident_rejected(self):
        with pytest.raises(GeometryError):
            bisector(Point(E2, [1, 1]), Point(E2, [1, 1]))

    def test_antipodal_rejected(self):
        with pytest.raises(GeometryError):
            bisector(Point(S2, [0, 0, 1]), Point(S2, [0, 0, -1]))

    @settings(max_examples=40, deadline=None)
    @given(st.tuples(st.floats(-2, 2), st.floats(0.2, 3)), st.tuples(st.floats(-2, 2), st.floats(0.2, 3)),
           st.tuples(st.floats(-2, 2), st.floats(0.2, 3)))
    def test_closer_side(self, a, b, c):
        x, y, p = Point(H2, list(a)), Point(H2, list(b)), Point(H2, list(c))
        if dist(x, y) < 1e-3 or abs(dist(p, x) - dist(p, y)) < 1e-6:
            return
        z = bisector(x, y)
        assert (side_test(z, p) == "interior") == (dist(p, x) < dist(p, y))


class TestPolyhedron:
    def test_redundant_face_dropped(self):
        P = Polyhedron(E2, unit_square() + [HalfSpace.from_normal(E2, [1, 0], 2.0)])
        assert P.is_thick()
        assert P.essential_flags() == [True, True, True, True, False]
        assert len(essential_halfspaces(P)) == 4
        assert len(P.reduced().halfspaces) == 4

    def test_duplicate_face_counted_once(self):
        sq = unit_square()
        P = Polyhedron(E2, sq + [sq[0]])
        assert sum(P.essential_flags()) == 4

    def test_touching_face_not_essential(self):
        # x + y <= 1 touches the square only at its corner
        P = Polyhedron(E2, unit_square() + [HalfSpace.from_normal(E2, [1, 1], 1.0)])
        assert P.essential_flags()[-1] is False

    def test_slab_of_width_zero(self):
        P = Polyhedron(E2, [HalfSpace.from_normal(E2, [1, 0]), HalfSpace.from_normal(E2, [-1, 0])])
        assert not is_thick(P)
        X, dim = P.relative_interior()
        assert dim == 1
        assert abs(X[0]) < 1e-9
        with pytest.raises(NotThickError):
            P.essential_flags()

    def test_empty(self):
        P = Polyhedron(E2, [HalfSpace.from_normal(E2, [1, 0], -1.0),
                            HalfSpace.from_normal(E2, [-1, 0], -1.0)])
        with pytest.raises(EmptyPolyhedronError):
            P.is_thick()

    def test_no_halfspaces_is_whole_space(self):
        P = Polyhedron(E2, [])
        assert P.is_thick()
        assert P.contains(Point(E2, [100.0, -3.0]))

    def test_relative_interior_point(self):
        x = relative_interior_point(Polyhedron(E2, unit_square()))
        assert np.all(np.abs(x.coords) < 0.5)

    def test_transform_contains(self):
        P = Polyhedron(E2, unit_square())
        g = Isometry.translation(E2, [3.0, 0.0])
        assert P.transform(g).contains(Point(E2, [3.2, 0.1]))
        assert not P.transform(g).contains(Point(E2, [0.0, 0.0]))

    def test_spherical_octant(self):
        rows = [HalfSpace(S2, -np.eye(3)[i]) for i in range(3)]
        P = Polyhedron(S2, rows)
        assert P.is_thick()
        assert all(P.essential_flags())
        assert P.contains(P.center)
        assert np.allclose(P.center, np.ones(3) / np.sqrt(3), atol=1e-6)

    def test_spherical_hemisphere_rejected(self):
        # a lune reaches both poles, so no open hemisphere contains it
        rows = [HalfSpace(S2, [1.0, 0, 0]), HalfSpace(S2, [0, -1.0, 0])]
        with pytest.raises(GeometryError, match="hemisphere"):
            Polyhedron(S2, rows)

    def test_hyperbolic_ideal_triangle_region(self):
        # modular fundamental domain walls
        P = Polyhedron(H2, [
            HalfSpace.through(H2, [Point(H2, [0.5, 1]), Point(H2, [0.5, 2])], Point(H2, [0, 2])),
            HalfSpace.through(H2, [Point(H2, [-0.5, 1]), Point(H2, [-0.5, 2])], Point(H2, [0, 2])),
            HalfSpace.through(H2, [Point(H2, [0.6, 0.8]), Point(H2, [-0.6, 0.8])], Point(H2, [0, 2])),
        ])
        assert P.is_thick()
        assert all(P.essential_flags())
        assert P.contains(Point(H2, [0.0, 2.0]))
        assert not P.contains(Point(H2, [0.0, 0.9]))

    def test_three_dimensional_cube(self):
        rows = [HalfSpace.from_normal(E3, s * np.eye(3)[i], 0.5) for i in range(3) for s in (1, -1)]
        rows.append(HalfSpace.from_normal(E3, [1, 1, 1], 1.5))  # touches a corner only
        P = Polyhedron(E3, rows)
        assert P.essential_flags() == [True] * 6 + [False]

    def test_ridges_of_square_and_cube(self):
        assert Polyhedron(E2, unit_square()).ridges() == [(0, 2), (0, 3), (1, 2), (1, 3)]
        rows = [HalfSpace.from_normal(E3, s * np.eye(3)[i], 0.5) for i in range(3) for s in (1, -1)]
        assert len(Polyhedron(E3, rows).ridges()) == 12

    def test_ideal_vertex_is_not_a_ridge(self):
        walls = [HalfSpace.through(H2, [Point(H2, [x, 1]), Point(H2, [x, 2])], Point(H2, [0, 2]))
                 for x in (0.5, -0.5)]
        assert Polyhedron(H2, walls).ridges() == []


class TestChart:
    def test_round_trip(self):
        chart = AffineChart(H2, Point(H2, [0.3, 1.4]).canonical)
        X = Point(H2, [-0.5, 0.7]).canonical
        assert np.allclose(chart.to_canonical(chart.to_chart(X)), X)

    def test_center_maps_to_origin(self):
        c = Point(H2, [0.3, 1.4]).canonical
        assert np.allclose(AffineChart(H2, c).to_chart(c), 0, atol=1e-12)

    def test_chart_radius(self):
        assert chart_radius(Space("euclidean", 2), 2.0) == pytest.approx(2.0)
        assert chart_radius(H2, 1.0) == pytest.approx(np.tanh(1.0))
        assert chart_radius(S2, np.pi / 4) == pytest.approx(1.0)


class TestSpecProperties:
    def test_side_test_examples(self):
        z = HalfSpace.from_normal(E2, [1, 0])
        assert side_test(z, Point(E2, [-1, 0])) == "interior"
        assert side_test(z, Point(E2, [0, 5])) == "boundary"
        assert side_test(z, Point(E2, [1e-12, 0]), tol=1e-9) == "boundary"

    def test_single_halfspace_and_wedge(self):
        z = HalfSpace.from_normal(E2, [0, -1])
        assert essential_halfspaces(Polyhedron(E2, [z])) == [z]
        th = np.pi / 5
        wedge = Polyhedron(E2, [z, HalfSpace.from_normal(E2, [-np.sin(th), np.cos(th)])])
        assert wedge.is_thick() and all(wedge.essential_flags())
        assert wedge.contains(relative_interior_point(wedge), tol=-1e-9)

    def test_segment_relative_interior(self):
        P = Polyhedron(E2, [HalfSpace.from_normal(E2, [1, 0]), HalfSpace.from_normal(E2, [-1, 0]),
                            HalfSpace.from_normal(E2, [0, 1], 1.0), HalfSpace.from_normal(E2, [0, -1])])
        X, dim = P.relative_interior()
        assert dim == 1 and abs(X[0]) < 1e-9 and 0 < X[1] < 1

    def test_bisector_examples(self):
        z = bisector(Point(E2, [0, 0]), Point(E2, [2, 0]))
        assert np.allclose(z.normal, [1, 0]) and z.offset == pytest.approx(1.0)
        x, y = Point(S2, [1, 0, 0]), Point(S2, [0, 0, 1])
        zs = bisector(x, y)
        m = Point(S2, list(np.array([1, 0, 1]) / np.sqrt(2)))
        assert side_test(zs, m, tol=1e-12) == "boundary"
        assert side_test(zs, x) == "interior"

    @settings(max_examples=30, deadline=None)
    @given(st.tuples(st.floats(-2, 2), st.floats(0.2, 3)), st.tuples(st.floats(-2, 2), st.floats(0.2, 3)))
    def test_bisectors_are_complementary(self, a, b):
        x, y = Point(H2, list(a)), Point(H2, list(b))
        if dist(x, y) < 1e-3:
            return
        assert np.allclose(bisector(x, y).row, bisector(y, x).complement().row, atol=1e-9)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.floats(0, 2 * np.pi), st.floats(0.2, 2.0)), min_size=3, max_size=8),
           st.randoms(use_true_random=False))
    def test_essential_idempotent_and_order_independent(self, faces, rnd):
        hs = [HalfSpace.from_normal(E2, [np.cos(t), np.sin(t)], c) for t, c in faces]
        hs += [HalfSpace.from_normal(E2, v, 3.0) for v in ([1, 0], [-1, 0], [0, 1], [0, -1])]
        P = Polyhedron(E2, hs)
        ess = {tuple(np.round(z.row, 9)) for z in P.essential_halfspaces()}
        shuffled = list(hs)
        rnd.shuffle(shuffled)
        assert {tuple(np.round(z.row, 9)) for z in Polyhedron(E2, shuffled).essential_halfspaces()} == ess
        again = Polyhedron(E2, P.essential_halfspaces())
        assert all(again.essential_flags())
        # same set on probes
        rng = np.random.default_rng(0)
        for xy in rng.uniform(-3.5, 3.5, size=(200, 2)):
            X = Point(E2, list(xy)).canonical
            assert P.contains(X, tol=0) == again.contains(X, tol=0)

    @settings(max_examples=20, deadline=None)
    @given(st.lists(st.tuples(st.floats(0, 2 * np.pi), st.floats(0.2, 2.0)), min_size=3, max_size=7))
    def test_boundary_is_union_of_essential_faces(self, faces):
        hs = [HalfSpace.from_normal(E2, [np.cos(t), np.sin(t)], c) for t, c in faces]
        hs += [HalfSpace.from_normal(E2, v, 3.0) for v in ([1, 0], [-1, 0], [0, 1], [0, -1])]
        P = Polyhedron(E2, hs)
        center = P.margin()[1][:2]
        ess = P.essential_halfspaces()
        # walk rays out of an interior point to the boundary
        for t in np.linspace(0, 2 * np.pi, 24, endpoint=False):
            u = np.array([np.cos(t), np.sin(t)])
            hits = [(-(z.row[:2] @ center + z.row[2]) / (z.row[:2] @ u)) for z in hs if z.row[:2] @ u > 1e-12]
            X = np.append(center + min(hits) * u, 1.0)
            assert min(abs(float(z.value(X))) for z in ess) < 1e-9

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.floats(0, 2 * np.pi), min_size=3, max_size=3))
    def test_three_halfspaces_through_a_point(self, angles):
        # boundaries all pass through the origin: codimension-2 common intersection
        hs = [HalfSpace.from_normal(E2, [np.cos(t), np.sin(t)]) for t in angles]
        P = Polyhedron(E2, hs)
        try:
            thick = P.is_thick()
        except EmptyPolyhedronError:
            return
        if thick and P.margin()[0] > 1e-4:
            assert len(P.essential_halfspaces()) <= 2
