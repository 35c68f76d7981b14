"""Convex polyhedra as intersections of half-spaces."""

from poincare.geometry import Point, Space
from poincare.polyhedra import HalfSpace, Polyhedron, bisector, side_test

E2 = Space("euclidean", 2)
square = Polyhedron(E2, [HalfSpace.from_normal(E2, n, 0.5) for n in ([1, 0], [-1, 0], [0, 1], [0, -1])])
print("square contains (0.2, 0.3):", square.contains(Point(E2, [0.2, 0.3])))
print("square ridges (pairs of faces meeting at a corner):", square.ridges())

# a redundant wall is kept in the list but is not an essential face
loose = Polyhedron(E2, square.halfspaces + [HalfSpace.from_normal(E2, [1, 1], 3.0)])
print("essential flags with a redundant wall:", loose.essential_flags())

H2 = Space("hyperbolic", 2, "half-space")
x, y = Point(H2, [0.0, 1.0]), Point(H2, [0.0, 4.0])
h = bisector(x, y)
print("bisector of i and 4i passes through 2i:", side_test(h, Point(H2, [0.0, 2.0])))
print("i is on the", side_test(h, x), "side, 4i is", side_test(h, y))
