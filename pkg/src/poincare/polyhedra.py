"""Half-spaces, convex polyhedra and their linear-programming predicates.

A closed half-space is stored as a row ``f`` with ``Z = {X : f . X <= 0}`` on
canonical vectors. Rows are normalized so that ``f . X`` is the sine,
identity or hyperbolic sine of the signed distance from ``X`` to the
boundary (spherical, euclidean, hyperbolic). Tolerances on ``f . X`` are
therefore metric.

Feasibility questions are answered in an affine chart centered at a chosen
point (Cartesian, gnomonic or Klein), where every half-space is a linear
inequality. Strict feasibility is a linear program that maximizes a common
margin.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog, nnls

from .geometry import TOL, TOL_GEOM, GeometryError, Isometry, Point, Space


class EmptyPolyhedronError(GeometryError):
    pass


class NotThickError(GeometryError):
    pass


def _normalize_row(space: Space, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if space.kind == "euclidean":
        s = np.linalg.norm(f[:-1])
    elif space.kind == "spherical":
        s = np.linalg.norm(f)
    else:
        q = float(np.sum(f[:-1] ** 2) - f[-1] ** 2)
        if q <= 1e-300:
            raise GeometryError("hyperbolic half-space needs a spacelike normal")
        s = np.sqrt(q)
    if s < 1e-300:
        raise GeometryError("degenerate half-space normal")
    return f / s


class HalfSpace:
    """Closed half-space ``{X : row . X <= 0}``.

    In user terms this is ``<normal, x> <= offset`` with the Euclidean inner
    product (euclidean), the ambient inner product with offset 0 (spherical)
    or the Lorentz product with offset 0 (hyperbolic).
    """

    __slots__ = ("space", "row")

    def __init__(self, space: Space, row):
        row = np.asarray(row, dtype=float).reshape(-1)
        if row.shape != (space.dim + 1,):
            raise GeometryError(f"half-space row must have length {space.dim + 1}")
        self.space = space
        self.row = _normalize_row(space, row)
        self.row.setflags(write=False)

    @classmethod
    def from_normal(cls, space: Space, normal, offset: float = 0.0) -> "HalfSpace":
        normal = np.asarray(normal, dtype=float)
        if space.kind == "euclidean":
            if normal.shape != (space.dim,):
                raise GeometryError(f"euclidean normal must have length {space.dim}")
            return cls(space, np.append(normal, -offset))
        if abs(offset) > 0:
            raise GeometryError(f"{space.kind} hyperplanes pass through the origin; offset must be 0")
        if normal.shape != (space.dim + 1,):
            raise GeometryError(f"{space.kind} normal must have length {space.dim + 1}")
        if space.kind == "spherical":
            return cls(space, normal)
        return cls(space, normal * space.form)

    @classmethod
    def through(cls, space: Space, points, inside) -> "HalfSpace":
        """Half-space bounded by the hyperplane through ``points`` and containing ``inside``."""
        X = np.array([p.canonical if isinstance(p, Point) else space.to_canonical(p) for p in points])
        if X.shape[0] != space.dim:
            raise GeometryError(f"need {space.dim} points to span a hyperplane")
        _, sv, vt = np.linalg.svd(X)
        if sv[-1] < 1e-12 * max(1.0, sv[0]):
            raise GeometryError("points do not span a hyperplane")
        f = vt[-1]
        c = inside.canonical if isinstance(inside, Point) else space.to_canonical(inside)
        if f @ c > 0:
            f = -f
        return cls(space, f)

    @property
    def normal(self) -> np.ndarray:
        if self.space.kind == "euclidean":
            return self.row[:-1].copy()
        if self.space.kind == "spherical":
            return self.row.copy()
        return self.row * self.space.form

    @property
    def offset(self) -> float:
        return float(-self.row[-1]) if self.space.kind == "euclidean" else 0.0

    @property
    def dual(self) -> np.ndarray:
        """Vector ``w`` with ``X - 2 (row . X) w`` the reflection in the boundary."""
        if self.space.kind == "euclidean":
            return np.append(self.row[:-1], 0.0)
        return self.row * self.space.form

    def value(self, X) -> np.ndarray:
        """Signed metric value (sinh/identity/sin of the distance) at canonical vectors."""
        return np.asarray(X) @ self.row

    def transform(self, g: Isometry) -> "HalfSpace":
        return HalfSpace(self.space, self.row @ g.inverse().matrix)

    def complement(self) -> "HalfSpace":
        """The other closed half-space with the same boundary."""
        return HalfSpace(self.space, -self.row)

    def to_json(self) -> dict:
        return {"normal": [float(v) for v in self.normal], "offset": self.offset}

    @classmethod
    def from_json(cls, space: Space, data: dict) -> "HalfSpace":
        return cls.from_normal(space, data["normal"], data.get("offset", 0.0))

    def __repr__(self):
        return f"HalfSpace({self.space.kind}, row={np.array2string(self.row, precision=5)})"


def side_test(Z: HalfSpace, x: Point, tol: float = TOL) -> str:
    """Classify ``x`` as 'interior', 'boundary' or 'outside' of ``Z``."""
    if not Z.space.same_geometry(x.space):
        raise GeometryError("space mismatch")
    v = float(Z.value(x.canonical))
    if abs(v) <= tol:
        return "boundary"
    return "interior" if v < 0 else "outside"


def bisector(x: Point, y: Point) -> HalfSpace:
    """The closed half-space of points at least as close to ``x`` as to ``y``."""
    space = x.space
    if not space.same_geometry(y.space):
        raise GeometryError("space mismatch")
    X, Y = x.canonical, y.canonical
    if space.canonical_distance(X, Y) < TOL:
        raise GeometryError("bisector of coincident points")
    if space.kind == "euclidean":
        a, b = X[:-1], Y[:-1]
        return HalfSpace(space, np.append(b - a, -(b @ b - a @ a) / 2.0))
    if space.kind == "spherical":
        if np.linalg.norm(X + Y) < TOL:
            raise GeometryError("bisector of antipodal points is not defined")
        return HalfSpace(space, Y - X)
    # <z, y - x>_L <= 0
    return HalfSpace(space, (Y - X) * space.form)


# ---------------------------------------------------------------------------
# affine charts and linear programs


_BALL_CACHE: dict[int, tuple[np.ndarray, float]] = {}


def _ball_rows(n: int) -> tuple[np.ndarray, float]:
    """Directions ``u`` and level ``c`` with ``{u . k <= c}`` inside the unit ball."""
    if n in _BALL_CACHE:
        return _BALL_CACHE[n]
    if n == 1:
        U, c = np.array([[1.0], [-1.0]]), 1.0
    elif n == 2:
        m = 256
        th = 2 * np.pi * np.arange(m) / m
        U, c = np.stack([np.cos(th), np.sin(th)], axis=1), float(np.cos(np.pi / m))
    else:
        m = 128 * n * n
        rng = np.random.default_rng(12345)
        U = rng.normal(size=(m, n))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        probe = rng.normal(size=(20000, n))
        probe /= np.linalg.norm(probe, axis=1, keepdims=True)
        worst = np.min(np.max(probe @ U.T, axis=1))
        c = float(np.cos(1.2 * np.arccos(worst)))
    _BALL_CACHE[n] = (U, c)
    return U, c


class AffineChart:
    """Affine chart centered at a canonical point: geodesics are straight lines."""

    BOX = 1e6

    def __init__(self, space: Space, center=None, radius: float | None = None):
        self.space = space
        self.radius = radius
        self.n = space.dim
        c = space.origin if center is None else np.asarray(center, dtype=float)
        self.W = Isometry.moving_to_origin(space, c)
        self.Winv = self.W.inverse()

    def rows(self, F) -> tuple[np.ndarray, np.ndarray]:
        """Chart inequalities ``A k <= b`` for canonical rows ``F``."""
        R = np.atleast_2d(F) @ self.Winv.matrix
        return R[:, : self.n], -R[:, self.n]

    def to_chart(self, X) -> np.ndarray:
        Y = np.asarray(X) @ self.W.matrix.T
        return Y[..., : self.n] / Y[..., self.n: self.n + 1]

    def to_canonical(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        Y = np.concatenate([k, np.ones(k.shape[:-1] + (1,))], axis=-1)
        return self.space.normalize(Y @ self.Winv.matrix.T)

    def _domain(self):
        """Inner polygon of the admissible chart ball, or None when unbounded."""
        if self.radius is not None:
            U, c = _ball_rows(self.n)
            return U, c * self.radius
        if self.space.kind == "hyperbolic":
            return _ball_rows(self.n)
        return None

    def _bounds(self):
        b = 1.0 if self.space.kind == "hyperbolic" else self.BOX
        return [(-b, b)] * self.n

    def margin(self, F, eq=None, cap: float = 1.0):
        """Maximize the common slack ``s`` of the rows in ``F``.

        Rows in ``eq`` are imposed as equalities. Returns ``(s, k)``;
        ``s = -inf`` and ``k = None`` when the system is infeasible. In the
        hyperbolic chart the unit ball is approximated from inside.
        """
        n = self.n
        A_ub, b_ub = [], []
        if F is not None and len(F):
            A, b = self.rows(F)
            norms = np.linalg.norm(A, axis=1)
            for a, bb, nr in zip(A, b, norms):
                if nr < 1e-12:
                    if bb < -1e-12:
                        return -np.inf, None
                    continue
                A_ub.append(np.append(a / nr, 1.0))
                b_ub.append(bb / nr)
        dom = self._domain()
        if dom is not None:
            U, c = dom
            A_ub.extend(np.hstack([U, np.ones((len(U), 1))]))
            b_ub.extend([c] * len(U))
        A_eq = b_eq = None
        if eq is not None and len(eq):
            Ae, be = self.rows(eq)
            norms = np.linalg.norm(Ae, axis=1)
            keep = norms > 1e-12
            if np.any(~keep & (np.abs(be) > 1e-12)):
                return -np.inf, None
            A_eq = np.hstack([Ae[keep] / norms[keep, None], np.zeros((keep.sum(), 1))])
            b_eq = be[keep] / norms[keep]
        cost = np.zeros(n + 1)
        cost[-1] = -1.0
        res = linprog(
            cost,
            A_ub=np.array(A_ub) if A_ub else None,
            b_ub=np.array(b_ub) if b_ub else None,
            A_eq=A_eq,
            b_eq=b_eq,
            bounds=self._bounds() + [(-10.0, cap)],
            method="highs",
        )
        if res.status != 0:
            return -np.inf, None
        return float(res.x[-1]), res.x[:n]

    def max_slack(self, F, i: int, eq=None):
        """Largest achievable slack of row ``i`` subject to all rows of ``F``."""
        A, b = self.rows(F)
        norms = np.maximum(np.linalg.norm(A, axis=1), 1e-300)
        A = A / norms[:, None]
        b = b / norms
        A_ub, b_ub = list(A), list(b)
        dom = self._domain()
        if dom is not None:
            U, c = dom
            A_ub.extend(U)
            b_ub.extend([c] * len(U))
        A_eq = b_eq = None
        if eq is not None and len(eq):
            Ae, be = self.rows(eq)
            ne = np.linalg.norm(Ae, axis=1)
            A_eq, b_eq = Ae / ne[:, None], be / ne
        res = linprog(A[i], A_ub=np.array(A_ub), b_ub=np.array(b_ub), A_eq=A_eq, b_eq=b_eq,
                      bounds=self._bounds(), method="highs")
        if res.status != 0:
            return -np.inf, None
        return float(b[i] - A[i] @ res.x), res.x

    def min_norm(self, F):
        """Least-norm chart point of ``{A k <= b}`` (Lawson-Hanson LDP via NNLS)."""
        A, b = self.rows(F)
        norms = np.linalg.norm(A, axis=1)
        keep = norms > 1e-12
        if np.any(~keep & (b < -1e-12)):
            return np.inf, None
        A, b = A[keep] / norms[keep, None], b[keep] / norms[keep]
        if len(A) == 0:
            return 0.0, np.zeros(self.n)
        # min |k| s.t. G k >= h with G = -A, h = -b
        E = np.vstack([-A.T, -b[None, :]])
        f = np.zeros(self.n + 1)
        f[-1] = 1.0
        u, _ = nnls(E, f, maxiter=50 * E.shape[1] + 100)
        r = E @ u - f
        if np.linalg.norm(r) < 1e-12 or abs(r[-1]) < 1e-14:
            return np.inf, None
        k = -r[:-1] / r[-1]
        if np.max(A @ k - b) > 1e-7:
            return np.inf, None
        return float(np.linalg.norm(k)), k


def chart_radius(space: Space, r: float) -> float:
    """Radius in the centered affine chart of a metric ball of radius ``r``."""
    if space.kind == "euclidean":
        return r
    if space.kind == "hyperbolic":
        return float(np.tanh(r))
    if r >= np.pi / 2:
        raise GeometryError("spherical windows must have radius below pi/2")
    return float(np.tan(r))


def implicit_equalities(chart: AffineChart, F, tol: float = TOL_GEOM) -> list[int]:
    """Indices of rows that hold with equality on the whole set ``{F <= 0}``."""
    F = np.atleast_2d(F)
    s, k = chart.margin(F)
    if k is None:
        raise EmptyPolyhedronError("polyhedron is empty")
    if s > tol:
        return []
    if s < -tol:
        raise EmptyPolyhedronError("polyhedron is empty")
    A, b = chart.rows(F)
    norms = np.maximum(np.linalg.norm(A, axis=1), 1e-300)
    undecided = set(range(len(F)))
    slack = (b - A @ k) / norms
    undecided -= {i for i in undecided if slack[i] > tol}
    implicit = []
    for i in sorted(undecided):
        if i not in undecided:
            continue
        val, x = chart.max_slack(F, i)
        if x is None:
            raise EmptyPolyhedronError("polyhedron is empty")
        if val <= tol:
            implicit.append(i)
            undecided.discard(i)
        else:
            sl = (b - A @ x) / norms
            undecided -= {j for j in undecided if sl[j] > tol}
    return implicit


def _spherical_center(F, tol: float = TOL_GEOM) -> np.ndarray:
    """Interior direction of the cone ``{F X <= 0}``, checked to fit a hemisphere."""
    d = F.shape[1] if len(F) else 0
    if not len(F):
        return np.eye(1, d or 1, (d or 1) - 1)[0]
    cost = np.zeros(d + 1)
    cost[-1] = -1.0
    A = np.hstack([F, np.ones((len(F), 1))])
    res = linprog(cost, A_ub=A, b_ub=np.zeros(len(F)), bounds=[(-1, 1)] * d + [(None, 1.0)],
                  method="highs")
    if res.status != 0 or res.x[-1] <= tol:
        raise EmptyPolyhedronError("spherical polyhedron has empty interior")
    c = res.x[:d] / np.linalg.norm(res.x[:d])
    # the cone must meet the plane c.X = 0 only at 0
    for sign in (1.0, -1.0):
        for j in range(d):
            obj = np.zeros(d)
            obj[j] = -sign
            r = linprog(obj, A_ub=F, b_ub=np.zeros(len(F)), A_eq=c[None, :], b_eq=[0.0],
                        bounds=[(-1, 1)] * d, method="highs")
            if r.status == 0 and -r.fun > 1e-9:
                raise GeometryError("spherical polyhedron must lie in an open hemisphere")
    return c


class Polyhedron:
    """Finite intersection of closed half-spaces.

    ``center`` is the canonical point at which feasibility charts are
    centered; it defaults to the space origin.
    """

    def __init__(self, space: Space, halfspaces, center=None, tol: float = TOL_GEOM):
        self.space = space
        self.halfspaces = list(halfspaces)
        for z in self.halfspaces:
            if not z.space.same_geometry(space):
                raise GeometryError("half-space from a different space")
        self.tol = tol
        if center is None:
            center = _spherical_center(self.rows, tol) if space.kind == "spherical" else space.origin
        self.center = space.normalize(np.asarray(center, dtype=float))
        self._essential: list[bool] | None = None
        self._thick: bool | None = None

    @property
    def rows(self) -> np.ndarray:
        if not self.halfspaces:
            return np.zeros((0, self.space.dim + 1))
        return np.array([z.row for z in self.halfspaces])

    def chart(self) -> AffineChart:
        return AffineChart(self.space, self.center)

    def contains(self, x, tol: float = TOL) -> bool:
        X = x.canonical if isinstance(x, Point) else np.asarray(x)
        return bool(len(self.halfspaces) == 0 or np.max(self.rows @ X) <= tol)

    def transform(self, g: Isometry) -> "Polyhedron":
        P = Polyhedron(self.space, [z.transform(g) for z in self.halfspaces],
                       center=g.act(self.center), tol=self.tol)
        P._essential = self._essential
        P._thick = self._thick
        return P

    def margin(self):
        if not self.halfspaces:
            return np.inf, self.center
        s, k = self.chart().margin(self.rows)
        if k is None or s < -self.tol:
            raise EmptyPolyhedronError("polyhedron is empty")
        return s, self.chart().to_canonical(k)

    def is_thick(self) -> bool:
        if self._thick is None:
            s, _ = self.margin()
            self._thick = bool(s > self.tol)
        return self._thick

    def essential_flags(self) -> list[bool]:
        if self._essential is not None:
            return self._essential
        if not self.is_thick():
            raise NotThickError("essential half-spaces are defined for thick polyhedra")
        F = self.rows
        chart = self.chart()
        flags = [False] * len(F)
        seen: list[int] = []
        for i, f in enumerate(F):
            if any(np.max(np.abs(F[j] - f)) < 1e-9 for j in seen):
                continue  # duplicate boundary: the first copy represents it
            seen.append(i)
            others = [j for j in range(len(F)) if j != i and np.max(np.abs(F[j] - f)) >= 1e-9]
            s, _ = chart.margin(F[others] if others else None, eq=F[[i]])
            flags[i] = bool(s > self.tol)
        self._essential = flags
        return flags

    def essential_halfspaces(self) -> list[HalfSpace]:
        return [z for z, e in zip(self.halfspaces, self.essential_flags()) if e]

    def reduced(self) -> "Polyhedron":
        """The same polyhedron described by its essential half-spaces only."""
        P = Polyhedron(self.space, self.essential_halfspaces(), center=self.center, tol=self.tol)
        P._thick = True
        P._essential = [True] * len(P.halfspaces)
        return P

    def relative_interior(self):
        """(canonical point, dimension) of a relative-interior point."""
        if not self.halfspaces:
            return self.center, self.space.dim
        chart = self.chart()
        F = self.rows
        eq = implicit_equalities(chart, F, self.tol)
        rest = [i for i in range(len(F)) if i not in eq]
        s, k = chart.margin(F[rest] if rest else None, eq=F[eq] if eq else None)
        if k is None:
            raise EmptyPolyhedronError("polyhedron is empty")
        if eq:
            A, _ = chart.rows(F[eq])
            rank = np.linalg.matrix_rank(A / np.linalg.norm(A, axis=1, keepdims=True), tol=1e-6)
        else:
            rank = 0
        return chart.to_canonical(k), self.space.dim - int(rank)

    def ridges(self) -> list[tuple[int, int]]:
        """Pairs ``(i, j)`` of essential faces meeting in a codimension-2 face."""
        out = []
        ess = [i for i, e in enumerate(self.essential_flags()) if e]
        for a, i in enumerate(ess):
            for j in ess[a + 1:]:
                Q = self.ridge(i, j)
                try:
                    _, dim = Q.relative_interior()
                except EmptyPolyhedronError:
                    continue
                if dim == self.space.dim - 2:
                    out.append((i, j))
        return out

    def ridge(self, i: int, j: int) -> "Polyhedron":
        """The face of P on the boundaries of half-spaces ``i`` and ``j``."""
        extra = [self.halfspaces[i].complement(), self.halfspaces[j].complement()]
        return Polyhedron(self.space, self.halfspaces + extra, center=self.center, tol=self.tol)

    def __repr__(self):
        return f"Polyhedron({self.space.kind}, {len(self.halfspaces)} half-spaces)"


def is_thick(P: Polyhedron) -> bool:
    return P.is_thick()


def essential_halfspaces(P: Polyhedron) -> list[HalfSpace]:
    return P.essential_halfspaces()


def relative_interior_point(P: Polyhedron) -> Point:
    X, _ = P.relative_interior()
    return Point.from_canonical(P.space, X)
