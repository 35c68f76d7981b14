"""Points, distances and isometries in the three constant-curvature geometries."""

import numpy as np

from poincare.geometry import Isometry, Point, Space, convert, dist, geodesic_point, order

E2 = Space("euclidean", 2)
S2 = Space("spherical", 2)
H2 = Space("hyperbolic", 2, "half-space")

print("euclidean distance (0,0)-(3,4):", dist(Point(E2, [0, 0]), Point(E2, [3, 4])))
print("spherical distance pole-equator:", dist(Point(S2, [0, 0, 1]), Point(S2, [1, 0, 0])))

i, two_i = Point(H2, [0.0, 1.0]), Point(H2, [0.0, 2.0])
print("hyperbolic distance i-2i (log 2):", dist(i, two_i), np.log(2))
mid = geodesic_point(i, two_i, 0.5)
print("midpoint of i and 2i in the upper half-plane:", np.round(mid.coords, 9))

# the same point seen in the ball chart
ball = convert(two_i, "ball")
print("2i in the ball chart:", np.round(ball.coords, 9))

S = Isometry.from_mobius(H2, np.array([[0.0, -1.0], [1.0, 0.0]]))
ST = S @ Isometry.from_mobius(H2, np.array([[1.0, 1.0], [0.0, 1.0]]))
print("order of z -> -1/z:", order(S), " order of z -> -1/(z+1):", order(ST))
