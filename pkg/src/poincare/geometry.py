"""Points, isometries and distances in the constant-curvature spaces.

Every space has a canonical linear model in R^(n+1):

* euclidean: homogeneous affine coordinates ``(x, 1)``;
* spherical: unit vectors of R^(n+1);
* hyperbolic: the upper sheet of the hyperboloid ``<X, X>_L = -1`` with the
  time coordinate last.

Isometries are (n+1)x(n+1) matrices acting linearly on these vectors, so
composition and inversion are plain matrix algebra in every geometry.
User-facing coordinates live in a chart and are converted on the way in and
out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TOL = 1e-9
TOL_GEOM = 1e-7

KINDS = ("euclidean", "spherical", "hyperbolic")
CHARTS = {
    "euclidean": ("cartesian",),
    "spherical": ("sphere-embedded",),
    "hyperbolic": ("half-space", "ball", "klein", "hyperboloid"),
}
DEFAULT_CHART = {
    "euclidean": "cartesian",
    "spherical": "sphere-embedded",
    "hyperbolic": "half-space",
}


class GeometryError(ValueError):
    """Invalid coordinates, mismatched spaces or degenerate configurations."""


@dataclass(frozen=True)
class Space:
    kind: str
    dim: int
    chart: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError(f"unknown geometry kind {self.kind!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise GeometryError(f"dimension must be a positive integer, got {self.dim!r}")
        if self.chart is None:
            object.__setattr__(self, "chart", DEFAULT_CHART[self.kind])
        if self.chart not in CHARTS[self.kind]:
            raise GeometryError(f"chart {self.chart!r} is not a chart of {self.kind} space")

    @property
    def n(self) -> int:
        return self.dim

    def with_chart(self, chart: str) -> "Space":
        return Space(self.kind, self.dim, chart)

    def same_geometry(self, other: "Space") -> bool:
        return self.kind == other.kind and self.dim == other.dim

    @property
    def coord_len(self) -> int:
        if self.chart in ("sphere-embedded", "hyperboloid"):
            return self.dim + 1
        return self.dim

    # canonical model helpers -------------------------------------------

    @property
    def origin(self) -> np.ndarray:
        """Canonical vector of the chart origin; always the last basis vector."""
        e = np.zeros(self.dim + 1)
        e[-1] = 1.0
        return e

    @property
    def form(self) -> np.ndarray:
        """Diagonal of the bilinear form used for normals and dual vectors."""
        d = np.ones(self.dim + 1)
        if self.kind == "hyperbolic":
            d[-1] = -1.0
        elif self.kind == "euclidean":
            d[-1] = 0.0
        return d

    def normalize(self, X: np.ndarray) -> np.ndarray:
        """Project (arrays of) canonical vectors back onto the model."""
        X = np.asarray(X, dtype=float)
        if self.kind == "euclidean":
            return X / X[..., -1:]
        if self.kind == "spherical":
            return X / np.linalg.norm(X, axis=-1, keepdims=True)
        q = lorentz(X, X)
        if np.any(q >= 0):
            raise GeometryError("vector is not timelike; no hyperbolic point")
        X = X / np.sqrt(-q)[..., None]
        return np.where(X[..., -1:] < 0, -X, X)

    def to_canonical(self, coords) -> np.ndarray:
        """Chart coordinates (shape (..., coord_len)) to canonical vectors."""
        c = np.asarray(coords, dtype=float)
        if c.shape[-1] != self.coord_len:
            raise GeometryError(
                f"expected {self.coord_len} coordinates in chart {self.chart}, got {c.shape[-1]}")
        n = self.dim
        if self.chart == "cartesian":
            return np.concatenate([c, np.ones(c.shape[:-1] + (1,))], axis=-1)
        if self.chart == "sphere-embedded":
            r = np.linalg.norm(c, axis=-1)
            if np.any(np.abs(r - 1.0) > 1e-6):
                raise GeometryError("sphere coordinates must have unit norm")
            return c / r[..., None]
        if self.chart == "hyperboloid":
            q = lorentz(c, c)
            if np.any(np.abs(q + 1.0) > 1e-6 * np.maximum(1.0, c[..., -1] ** 2)) or np.any(c[..., -1] <= 0):
                raise GeometryError("hyperboloid coordinates must satisfy <x,x>_L = -1 with x_n > 0")
            return self.normalize(c)
        if self.chart == "half-space":
            s = c[..., -1]
            if np.any(s <= 0):
                raise GeometryError("half-space chart needs a positive last coordinate")
            y = c[..., :-1]
            q = np.sum(y * y, axis=-1) + s * s
            out = np.empty(c.shape[:-1] + (n + 1,))
            out[..., : n - 1] = y / s[..., None]
            out[..., n - 1] = (q - 1.0) / (2.0 * s)
            out[..., n] = (q + 1.0) / (2.0 * s)
            return out
        r2 = np.sum(c * c, axis=-1)
        if np.any(r2 >= 1.0):
            raise GeometryError(f"{self.chart} chart needs points inside the unit ball")
        if self.chart == "ball":
            out = np.concatenate([2.0 * c, (1.0 + r2)[..., None]], axis=-1)
            return out / (1.0 - r2)[..., None]
        # klein
        out = np.concatenate([c, np.ones(c.shape[:-1] + (1,))], axis=-1)
        return out / np.sqrt(1.0 - r2)[..., None]

    def from_canonical(self, X) -> np.ndarray:
        X = self.normalize(X)
        n = self.dim
        if self.chart == "cartesian":
            return X[..., :n].copy()
        if self.chart in ("sphere-embedded", "hyperboloid"):
            return X.copy()
        t = X[..., n]
        if self.chart == "ball":
            return X[..., :n] / (1.0 + t)[..., None]
        if self.chart == "klein":
            return X[..., :n] / t[..., None]
        # half-space: t - x_{n-1} = 1/s
        s = 1.0 / (t - X[..., n - 1])
        out = np.empty(X.shape[:-1] + (n,))
        out[..., : n - 1] = X[..., : n - 1] * s[..., None]
        out[..., n - 1] = s
        return out

    def canonical_distance(self, X, Y) -> np.ndarray:
        """Distance between canonical vectors, vectorized over leading axes."""
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        if self.kind == "euclidean":
            return np.linalg.norm(X[..., :-1] - Y[..., :-1], axis=-1)
        if self.kind == "spherical":
            return 2.0 * np.arctan2(np.linalg.norm(X - Y, axis=-1), np.linalg.norm(X + Y, axis=-1))
        D = X - Y
        q = np.maximum(lorentz(D, D), 0.0)
        return 2.0 * np.arcsinh(np.sqrt(q) / 2.0)


def lorentz(X, Y) -> np.ndarray:
    """Lorentz inner product with signature (+,...,+,-) over the last axis."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return np.sum(X[..., :-1] * Y[..., :-1], axis=-1) - X[..., -1] * Y[..., -1]


def chart_distances(space: Space, A, B) -> np.ndarray:
    """Distances computed with the chart's own metric formula (vectorized)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    ch = space.chart
    if ch == "cartesian":
        return np.linalg.norm(A - B, axis=-1)
    if ch == "sphere-embedded":
        return 2.0 * np.arctan2(np.linalg.norm(A - B, axis=-1), np.linalg.norm(A + B, axis=-1))
    if ch == "hyperboloid":
        D = A - B
        return 2.0 * np.arcsinh(np.sqrt(np.maximum(lorentz(D, D), 0.0)) / 2.0)
    if ch == "half-space":
        # cosh d = 1 + |a-b|^2 / (2 a_n b_n), written via sinh(d/2)
        num = np.linalg.norm(A - B, axis=-1)
        return 2.0 * np.arcsinh(num / (2.0 * np.sqrt(A[..., -1] * B[..., -1])))
    if ch == "ball":
        num = np.linalg.norm(A - B, axis=-1)
        den = np.sqrt((1.0 - np.sum(A * A, axis=-1)) * (1.0 - np.sum(B * B, axis=-1)))
        return 2.0 * np.arcsinh(num / den)
    # klein: the cross-ratio distance, rewritten without cancellation as
    # cosh d - 1 = (|u|^2 - |a ^ u|^2) / (sa sb (1 - a.b + sa sb)), u = b - a
    U = B - A
    uu = np.sum(U * U, axis=-1)
    au = np.sum(A * U, axis=-1)
    aa = np.sum(A * A, axis=-1)
    ab = np.sum(A * B, axis=-1)
    sa = np.sqrt(1.0 - aa)
    sb = np.sqrt(1.0 - np.sum(B * B, axis=-1))
    wedge = np.maximum(aa * uu - au * au, 0.0)
    c1 = np.maximum(uu - wedge, 0.0) / (sa * sb * (1.0 - ab + sa * sb))
    return 2.0 * np.arcsinh(np.sqrt(c1 / 2.0))


@dataclass(frozen=True, eq=False)
class Point:
    space: Space
    coords: np.ndarray = field(repr=True)

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        # validates chart invariants
        object.__setattr__(self, "_canonical", self.space.to_canonical(c))

    @classmethod
    def from_canonical(cls, space: Space, X) -> "Point":
        return cls(space, space.from_canonical(X))

    @property
    def canonical(self) -> np.ndarray:
        return self._canonical

    def __repr__(self):
        return f"Point({self.space.kind}/{self.space.chart}, {np.array2string(self.coords, precision=6)})"


def _check_same(a: Space, b: Space):
    if a != b:
        raise GeometryError(f"space mismatch: {a} vs {b}")


def dist(a: Point, b: Point) -> float:
    """Distance between two points of the same space, by the chart's formula."""
    _check_same(a.space, b.space)
    return float(chart_distances(a.space, a.coords, b.coords))


def geodesic_point(x: Point, y: Point, t: float) -> Point:
    """Constant-speed point on ``[x, y]``: ``d(x, result) = t * d(x, y)``."""
    _check_same(x.space, y.space)
    X = _geodesic_canonical(x.space, x.canonical, y.canonical, t)
    return Point.from_canonical(x.space, X)


def _geodesic_canonical(space: Space, X, Y, t):
    if space.kind == "euclidean":
        return (1.0 - t) * X + t * Y
    d = float(space.canonical_distance(X, Y))
    if space.kind == "spherical":
        if np.linalg.norm(X + Y) < TOL:
            raise GeometryError("antipodal points do not determine a unique geodesic")
        if d < 1e-8:
            return space.normalize((1.0 - t) * X + t * Y)
        return (np.sin((1.0 - t) * d) * X + np.sin(t * d) * Y) / np.sin(d)
    if d < 1e-8:
        return space.normalize((1.0 - t) * X + t * Y)
    return space.normalize((np.sinh((1.0 - t) * d) * X + np.sinh(t * d) * Y) / np.sinh(d))


def convert(x: Point, target_chart: str) -> Point:
    target = x.space.with_chart(target_chart)
    return Point.from_canonical(target, x.canonical)


def _probe_points(space: Space) -> np.ndarray:
    """n+2 canonical points around the origin: origin, one per axis, one diagonal."""
    n = space.dim
    pts = [space.origin]
    steps = [np.eye(n)[i] * 0.5 for i in range(n)] + [np.full(n, 0.3)]
    for v in steps:
        if space.kind == "euclidean":
            pts.append(np.append(v, 1.0))
        elif space.kind == "spherical":
            pts.append(space.normalize(np.append(v, 1.0)))
        else:
            pts.append(space.normalize(np.append(np.tanh(v), 1.0)))
    return np.array(pts)


class Isometry:
    """An isometry as a matrix acting on canonical vectors.

    ``mobius`` optionally carries an SL(2, R) representative for isometries
    of the upper half-plane; it is propagated through products and inverses.
    """

    __slots__ = ("space", "matrix", "mobius")

    def __init__(self, space: Space, matrix, mobius=None, check: bool = True):
        M = np.array(matrix, dtype=float)
        n = space.dim
        if M.shape != (n + 1, n + 1):
            raise GeometryError(f"isometry matrix must be {(n + 1, n + 1)}, got {M.shape}")
        if space.kind == "hyperbolic" and M[n, n] < 0:
            M = -M
        if check:
            _check_matrix(space, M)
        M.setflags(write=False)
        self.space = space
        self.matrix = M
        self.mobius = None if mobius is None else np.array(mobius, dtype=float)

    # constructors ------------------------------------------------------

    @classmethod
    def identity(cls, space: Space) -> "Isometry":
        return cls(space, np.eye(space.dim + 1), mobius=np.eye(2) if _is_h2(space) else None)

    @classmethod
    def from_point_map(cls, space: Space, func, chart: str | None = None) -> "Isometry":
        """Recover the matrix from a map on chart coordinates.

        The map is evaluated on n+1 linearly independent canonical points and
        the linear map through them is solved for; exact for true isometries.
        """
        chart_space = space.with_chart(chart or space.chart)
        probes = _probe_points(space)[: space.dim + 1]
        images = []
        for X in probes:
            y = np.asarray(func(chart_space.from_canonical(X)), dtype=float)
            images.append(chart_space.to_canonical(y))
        Xs = np.array(probes).T
        Ys = np.array(images).T
        if space.kind == "euclidean":
            M = Ys @ np.linalg.inv(Xs)
            M[-1] = 0.0
            M[-1, -1] = 1.0
        else:
            M = Ys @ np.linalg.inv(Xs)
        return cls(space, M)

    @classmethod
    def from_mobius(cls, space: Space, m) -> "Isometry":
        """Isometry of the hyperbolic plane from a real 2x2 matrix acting on the upper half-plane."""
        if not _is_h2(space):
            raise GeometryError("Mobius matrices are only supported for the hyperbolic plane")
        m = np.array(m, dtype=float)
        det = np.linalg.det(m)
        if det <= 0:
            raise GeometryError("Mobius matrix must have positive determinant")
        m = m / np.sqrt(det)
        a, b, c, d = m.ravel()

        def act(p):
            z = complex(p[0], p[1])
            w = (a * z + b) / (c * z + d)
            return [w.real, w.imag]

        g = cls.from_point_map(space, act, chart="half-space")
        return cls(space, g.matrix, mobius=m)

    @classmethod
    def affine(cls, space: Space, A, b) -> "Isometry":
        if space.kind != "euclidean":
            raise GeometryError("affine isometries are Euclidean")
        n = space.dim
        M = np.eye(n + 1)
        M[:n, :n] = A
        M[:n, n] = b
        return cls(space, M)

    @classmethod
    def translation(cls, space: Space, v) -> "Isometry":
        return cls.affine(space, np.eye(space.dim), v)

    @classmethod
    def reflection(cls, halfspace) -> "Isometry":
        """Reflection in the boundary hyperplane of a half-space."""
        f = halfspace.row
        w = halfspace.dual
        M = np.eye(len(f)) - 2.0 * np.outer(w, f)
        return cls(halfspace.space, M)

    @classmethod
    def moving_to_origin(cls, space: Space, X) -> "Isometry":
        """Some isometry sending the canonical point ``X`` to the origin."""
        X = space.normalize(X)
        o = space.origin
        n = space.dim
        if space.kind == "euclidean":
            return cls.translation(space, -X[:n])
        v = X - o
        if space.kind == "spherical":
            vv = float(v @ v)
            if vv < 1e-30:
                return cls.identity(space)
            return cls(space, np.eye(n + 1) - 2.0 * np.outer(v, v) / vv)
        vv = float(lorentz(v, v))
        if vv < 1e-30:
            return cls.identity(space)
        J = np.diag(space.form)
        return cls(space, np.eye(n + 1) - 2.0 * np.outer(v, J @ v) / vv)

    # group operations --------------------------------------------------

    def __matmul__(self, other: "Isometry") -> "Isometry":
        _check_same_geometry(self.space, other.space)
        mob = None
        if self.mobius is not None and other.mobius is not None:
            mob = self.mobius @ other.mobius
        return Isometry(self.space, self.matrix @ other.matrix, mobius=mob, check=False)

    __mul__ = __matmul__

    def inverse(self) -> "Isometry":
        M = self.matrix
        n = self.space.dim
        if self.space.kind == "spherical":
            Mi = M.T.copy()
        elif self.space.kind == "hyperbolic":
            J = np.diag(self.space.form)
            Mi = J @ M.T @ J
        else:
            A = M[:n, :n]
            Mi = np.eye(n + 1)
            Mi[:n, :n] = A.T
            Mi[:n, n] = -A.T @ M[:n, n]
        mob = None
        if self.mobius is not None:
            a, b, c, d = self.mobius.ravel()
            mob = np.array([[d, -b], [-c, a]])
        return Isometry(self.space, Mi, mobius=mob, check=False)

    def __pow__(self, k: int) -> "Isometry":
        if k < 0:
            return self.inverse() ** (-k)
        out = Isometry.identity(self.space)
        for _ in range(k):
            out = out @ self
        return out

    def act(self, X) -> np.ndarray:
        """Apply to canonical vectors (shape (..., n+1))."""
        return self.space.normalize(np.asarray(X) @ self.matrix.T)

    def __call__(self, x: Point) -> Point:
        return apply(self, x)

    def __repr__(self):
        return f"Isometry({self.space.kind}, {np.array2string(self.matrix, precision=4)})"


def _is_h2(space: Space) -> bool:
    return space.kind == "hyperbolic" and space.dim == 2


def _check_same_geometry(a: Space, b: Space):
    if not a.same_geometry(b):
        raise GeometryError(f"space mismatch: {a} vs {b}")


def _check_matrix(space: Space, M: np.ndarray, tol: float = 1e-8):
    n = space.dim
    scale = max(1.0, float(np.max(np.abs(M))) ** 2)
    if space.kind == "euclidean":
        if np.max(np.abs(M[n, :n])) > tol or abs(M[n, n] - 1.0) > tol:
            raise GeometryError("Euclidean isometry must be affine (last row 0,...,0,1)")
        A = M[:n, :n]
        if np.max(np.abs(A.T @ A - np.eye(n))) > tol:
            raise GeometryError("Euclidean isometry needs an orthogonal linear part")
    elif space.kind == "spherical":
        if np.max(np.abs(M.T @ M - np.eye(n + 1))) > tol:
            raise GeometryError("spherical isometry must be orthogonal")
    else:
        J = np.diag(space.form)
        if np.max(np.abs(M.T @ J @ M - J)) > tol * scale:
            raise GeometryError("hyperbolic isometry must preserve the Lorentz form")


def apply(g: Isometry, x: Point) -> Point:
    _check_same_geometry(g.space, x.space)
    return Point.from_canonical(x.space, g.act(x.canonical))


def iso_eq(g: Isometry, h: Isometry, tol: float = 1e-8) -> bool:
    """True iff g and h move every probe point to within ``tol`` of each other."""
    _check_same_geometry(g.space, h.space)
    P = _probe_points(g.space)
    d = g.space.canonical_distance(g.act(P), h.act(P))
    return bool(np.max(d) <= tol)


def is_identity(g: Isometry, tol: float = 1e-8) -> bool:
    return iso_eq(g, Isometry.identity(g.space), tol)


def order(g: Isometry, cap: int = 1000, tol: float = 1e-7) -> int | None:
    """Smallest t >= 1 with g^t = 1, or None if not found below ``cap``."""
    power = g
    for t in range(1, cap + 1):
        if is_identity(power, tol):
            return t
        power = power @ g
    return None


def matrix_key(g: Isometry, grid: float = 1e-6) -> tuple:
    return tuple(np.round(g.matrix.ravel() / grid).astype(np.int64).tolist())


class IsometrySet:
    """Tolerance-aware set of isometries keyed by quantized matrices."""

    def __init__(self, tol: float = 1e-6):
        self.tol = tol
        self.items: list[Isometry] = []
        self._keys: dict = {}
        self._flat: list = []

    def __len__(self):
        return len(self.items)

    def find(self, g: Isometry) -> int | None:
        for idx in self._keys.get(matrix_key(g), []):
            if iso_eq(self.items[idx], g, self.tol):
                return idx
        if not self._flat:
            return None
        # quantization can split nearly equal matrices across grid cells
        diff = np.max(np.abs(np.array(self._flat) - g.matrix.ravel()), axis=1)
        scale = max(1.0, float(np.max(np.abs(g.matrix))))
        for idx in np.nonzero(diff < 10 * self.tol * scale)[0]:
            if iso_eq(self.items[idx], g, self.tol):
                return int(idx)
        return None

    def add(self, g: Isometry) -> tuple[int, bool]:
        """Index of ``g`` and whether it was newly inserted."""
        idx = self.find(g)
        if idx is not None:
            return idx, False
        self._keys.setdefault(matrix_key(g), []).append(len(self.items))
        self.items.append(g)
        self._flat.append(g.matrix.ravel())
        return len(self.items) - 1, True
