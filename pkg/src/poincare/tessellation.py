"""Orbit tessellations explored inside a metric window, and their cells.

Tiles are images ``g(P)`` of a fundamental polyhedron. A cell is the set of
points contained in a fixed set of tiles; the cell generated by a point
``x`` is the intersection of all tiles containing ``x``. Cells are therefore
identified by the frozenset of indices of their containing tiles.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    TOL_GEOM,
    GeometryError,
    Isometry,
    IsometrySet,
    Point,
    Space,
    iso_eq,
)
from .polyhedra import AffineChart, Polyhedron, _normalize_row, chart_radius

log = logging.getLogger(__name__)

DEFAULT_CAP = 5000


class ExplorationCapError(GeometryError):
    """Too many tiles meet the window (non-discrete input or oversized window)."""


class IncidenceError(GeometryError):
    """Cells do not fit together as a tessellation should."""


@dataclass(frozen=True)
class Window:
    center: Point
    radius: float

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise GeometryError("window radius must be positive")
        if self.center.space.kind == "spherical" and self.radius >= np.pi / 2:
            raise GeometryError("spherical windows must have radius below pi/2")

    @property
    def space(self) -> Space:
        return self.center.space

    def enlarged(self, factor: float = 1.5) -> "Window":
        r = self.radius * factor
        if self.space.kind == "spherical":
            r = min(r, np.pi / 2 - 1e-3)
        return Window(self.center, r)

    def chart(self) -> AffineChart:
        return AffineChart(self.space, self.center.canonical, chart_radius(self.space, self.radius))

    def contains(self, X, tol: float = 1e-9) -> bool:
        return bool(self.space.canonical_distance(self.center.canonical, X) <= self.radius + tol)


@dataclass(eq=False)
class Tile:
    word: tuple
    element: Isometry | None
    polyhedron: Polyhedron

    @property
    def rows(self) -> np.ndarray:
        return self.polyhedron.rows


@dataclass(frozen=True, eq=False)
class Cell:
    """A cell of the explored tessellation.

    ``carrier`` holds the canonical rows of the hyperplanes through the cell;
    their rank is ``codim``.
    """

    space: Space
    tiles: frozenset
    codim: int
    representative: np.ndarray = field(repr=False)
    carrier: np.ndarray = field(repr=False)

    @property
    def key(self) -> tuple:
        return tuple(sorted(self.tiles))

    def point(self) -> Point:
        return Point.from_canonical(self.space, self.representative)

    def contains_cell(self, other: "Cell") -> bool:
        """True when ``other`` is a face of this cell (fewer tiles contain self)."""
        return self.tiles <= other.tiles

    def __eq__(self, other):
        return isinstance(other, Cell) and self.tiles == other.tiles

    def __hash__(self):
        return hash(self.tiles)


def _transformed_rows(P: Polyhedron, g: Isometry) -> np.ndarray:
    R = P.rows @ g.inverse().matrix
    return np.array([_normalize_row(P.space, r) for r in R]) if len(R) else R


def _rank(space: Space, X, rows, tol: float = 1e-6) -> int:
    if len(rows) == 0:
        return 0
    A, _ = AffineChart(space, X).rows(rows)
    A = A / np.maximum(np.linalg.norm(A, axis=1, keepdims=True), 1e-300)
    sv = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(sv > tol))


def segment_interval(rows, A, B, tol: float = 0.0):
    """Parameter interval ``{s in [0,1] : rows . ((1-s)A + sB) <= tol}`` or None."""
    lo, hi = 0.0, 1.0
    fa = np.asarray(rows) @ A
    fb = np.asarray(rows) @ B
    for a, b in zip(fa, fb):
        # (1 - s) a + s b <= tol  <=>  s (b - a) <= tol - a
        d = b - a
        if abs(d) < 1e-15:
            if a > tol:
                return None
            continue
        s = (tol - a) / d
        if d > 0:
            hi = min(hi, s)
        else:
            lo = max(lo, s)
    if lo > hi:
        return None
    return lo, hi


class Tessellation(Sequence):
    """Finitely many tiles explored in a window, with cached incidence queries."""

    def __init__(self, space: Space, tiles, window: Window, tol: float = TOL_GEOM, base=None):
        self.space = space
        self.tiles = list(tiles)
        self.window = window
        self.tol = tol
        self.base = base
        self.chart = window.chart()
        self._rows = [np.asarray(t.rows) for t in self.tiles]
        counts = [len(r) for r in self._rows]
        self._offsets = np.concatenate([[0], np.cumsum(counts)]).astype(int)
        self._all_rows = (np.vstack(self._rows) if sum(counts)
                          else np.zeros((0, space.dim + 1)))
        self._meet: dict = {}
        self._shared: dict = {}
        self._sides: dict = {}
        self._edges: dict = {}
        self._elements = IsometrySet()
        self._element_tile: list[int] = []
        for i, t in enumerate(self.tiles):
            if t.element is not None and self._elements.add(t.element)[1]:
                self._element_tile.append(i)

    @classmethod
    def from_polyhedra(cls, space: Space, polyhedra, window: Window, tol: float = TOL_GEOM):
        tiles = [Tile((i,), None, P) for i, P in enumerate(polyhedra)]
        return cls(space, tiles, window, tol)

    def __len__(self):
        return len(self.tiles)

    def __getitem__(self, i):
        return self.tiles[i]

    def rows(self, i: int) -> np.ndarray:
        return self._rows[i]

    def values(self, X) -> np.ndarray:
        """Maximum row value of every tile at canonical ``X``."""
        v = self._all_rows @ X
        out = np.full(len(self.tiles), -np.inf)
        for i in range(len(self.tiles)):
            a, b = self._offsets[i], self._offsets[i + 1]
            if b > a:
                out[i] = v[a:b].max()
        return out

    def containing(self, X, tol: float | None = None) -> list[int]:
        tol = self.tol if tol is None else tol
        return [int(i) for i in np.nonzero(self.values(X) <= tol)[0]]

    def index_of(self, g: Isometry) -> int | None:
        idx = self._elements.find(g)
        return None if idx is None else self._element_tile[idx]

    def cell_at(self, X) -> Cell:
        """The cell generated by canonical point ``X``."""
        X = self.space.normalize(np.asarray(X, dtype=float))
        if not self.window.contains(X, 1e-7):
            raise GeometryError("point lies outside the explored window")
        tiles = self.containing(X)
        if not tiles:
            raise GeometryError("point is not covered by explored tiles")
        active = []
        for i in tiles:
            R = self._rows[i]
            active.extend(R[np.abs(R @ X) <= self.tol])
        active = np.array(active) if active else np.zeros((0, self.space.dim + 1))
        return Cell(self.space, frozenset(tiles), _rank(self.space, X, active), X, active)

    # -- pairwise incidence -------------------------------------------------

    def meets(self, i: int, j: int) -> bool:
        key = (min(i, j), max(i, j))
        if key not in self._meet:
            s, _ = self.chart.margin(np.vstack([self._rows[i], self._rows[j]]))
            self._meet[key] = s
        return self._meet[key] >= -self.tol

    def _matching(self, f, j) -> np.ndarray:
        R = self._rows[j]
        scale = max(1.0, float(np.max(np.abs(f))))
        return np.max(np.abs(R + f), axis=1) < 1e-6 * scale

    def _side_point(self, i: int, r: int, j: int):
        """Relative-interior point of the wall of tile ``i`` on row ``r`` shared with ``j``."""
        f = self._rows[i][r]
        match = self._matching(f, j)
        if not match.any():
            return None
        Fi = np.delete(self._rows[i], r, axis=0)
        Fj = self._rows[j][~match]
        s, k = self.chart.margin(np.vstack([Fi, Fj]), eq=f[None, :])
        if k is None or s <= self.tol:
            return None
        return self.chart.to_canonical(k)

    def shares_side(self, i: int, j: int) -> bool:
        if i == j:
            return False
        key = (min(i, j), max(i, j))
        if key not in self._shared:
            a, b = key
            self._shared[key] = any(
                self._side_point(a, r, b) is not None for r in range(len(self._rows[a]))
            )
        return self._shared[key]

    # -- cells of a tile -----------------------------------------------------

    def side_cells(self, i: int = 0) -> list[Cell]:
        """Codimension-1 cells contained in tile ``i``, ordered by neighbour tile."""
        if i in self._sides:
            return self._sides[i]
        found: dict = {}
        for r in range(len(self._rows[i])):
            f = self._rows[i][r]
            for j in range(len(self.tiles)):
                if j == i or not self._matching(f, j).any():
                    continue
                X = self._side_point(i, r, j)
                if X is None:
                    continue
                cell = self.cell_at(X)
                if cell.tiles != frozenset((i, j)) or cell.codim != 1:
                    raise IncidenceError(
                        f"wall of tile {i} on face {r} is not a side shared with tile {j}"
                    )
                self._shared[(min(i, j), max(i, j))] = True
                found.setdefault(j, (r, cell))
        sides = [found[j][1] for j in sorted(found)]
        self._sides[i] = sides
        return sides

    def side_face(self, i: int, side: Cell) -> int:
        """Index of the row of tile ``i`` whose hyperplane carries ``side``."""
        vals = np.abs(self._rows[i] @ side.representative)
        return int(np.argmin(vals))

    def edge_cells(self, i: int = 0) -> list[Cell]:
        """Codimension-2 cells contained in tile ``i`` and meeting the window."""
        if i in self._edges:
            return self._edges[i]
        n = self.space.dim
        if n < 2:
            self._edges[i] = []
            return []
        if n > 3:
            raise GeometryError("edge discovery is implemented for dimension at most 3")
        near = [j for j in range(len(self.tiles)) if j == i or self.meets(i, j)]
        H = np.vstack([self._rows[j] for j in near])
        H = H[np.unique(np.round(H, 9), axis=0, return_index=True)[1]]
        chart = self.chart
        rho = chart.radius
        Ai, bi = chart.rows(self._rows[i])
        found: dict = {}

        def consider(k):
            if np.linalg.norm(k) > rho * (1 - 1e-9):
                return
            if np.any(Ai @ k - bi > 1e-9 * np.linalg.norm(Ai, axis=1).max()):
                return
            X = chart.to_canonical(k)
            try:
                cell = self.cell_at(X)
            except GeometryError:
                return
            if cell.codim == 2 and i in cell.tiles and cell.tiles not in found:
                found[cell.tiles] = cell

        AH, bH = chart.rows(H)
        nH = np.linalg.norm(AH, axis=1)
        for f_a, f_b in zip(Ai, bi):
            na = np.linalg.norm(f_a)
            for g_a, g_b, ng in zip(AH, bH, nH):
                M = np.array([f_a / na, g_a / ng])
                rhs = np.array([f_b / na, g_b / ng])
                if n == 2:
                    if abs(np.linalg.det(M)) < 1e-9:
                        continue
                    consider(np.linalg.solve(M, rhs))
                    continue
                d = np.cross(M[0], M[1])
                if np.linalg.norm(d) < 1e-9:
                    continue
                d /= np.linalg.norm(d)
                p = np.linalg.lstsq(M, rhs, rcond=None)[0]
                if np.linalg.norm(p) >= rho:
                    continue
                half = np.sqrt(rho**2 - p @ p)
                cuts = {-half, half}
                lo, hi = -half, half
                for j in near:
                    Aj, bj = chart.rows(self._rows[j])
                    tlo, thi = _line_interval(Aj @ d, bj - Aj @ p)
                    if j == i:
                        lo, hi = max(lo, tlo), min(hi, thi)
                    cuts.update(t for t in (tlo, thi) if np.isfinite(t))
                if hi - lo <= 1e-9:
                    continue
                ts = sorted(t for t in cuts if lo <= t <= hi) + [lo, hi]
                ts = sorted(set(ts))
                for t0, t1 in zip(ts, ts[1:]):
                    if t1 - t0 > 1e-9:
                        consider(p + 0.5 * (t0 + t1) * d)
        edges = sorted(found.values(), key=lambda c: c.key)
        self._edges[i] = edges
        return edges


def _line_interval(slope, rhs):
    """Interval of ``t`` with ``slope * t <= rhs`` componentwise."""
    lo, hi = -np.inf, np.inf
    for a, b in zip(slope, rhs):
        if abs(a) < 1e-15:
            if b < -1e-12:
                return np.inf, -np.inf
            continue
        if a > 0:
            hi = min(hi, b / a)
        else:
            lo = max(lo, b / a)
    return lo, hi


def _check_closed(pairings):
    for g in pairings:
        inv = g.inverse()
        if not any(iso_eq(inv, h) for h in pairings):
            raise GeometryError("pairings must be closed under inverses")


def explore_tiles(P: Polyhedron, pairings, window: Window, cap: int = DEFAULT_CAP,
                  tol: float = TOL_GEOM) -> Tessellation:
    """All tiles ``g(P)`` meeting ``window``, g a word in ``pairings``.

    Breadth-first search by right multiplication; tiles are returned sorted
    by (word length, word).
    """
    space = P.space
    P = P.reduced()
    pairings = list(pairings)
    _check_closed(pairings)
    chart = window.chart()
    rho = chart.radius

    def meets_window(rows):
        d, _ = chart.min_norm(rows)
        return d <= rho + 1e-9

    if not meets_window(P.rows):
        raise GeometryError("the window does not meet the fundamental polyhedron")
    ident = Isometry.identity(space)
    seen = IsometrySet()
    seen.add(ident)
    tiles = [Tile((), ident, P)]
    queue = deque([(ident, ())])

    while queue:
        g, w = queue.popleft()
        for j, p in enumerate(pairings):
            h = g @ p
            if not seen.add(h)[1]:
                continue
            rows = _transformed_rows(P, h)
            if not meets_window(rows):
                continue
            word = w + (j,)
            tiles.append(Tile(word, h, P.transform(h)))
            if len(tiles) > cap:
                raise ExplorationCapError(
                    f"more than {cap} tiles meet the window; the group may not be discrete"
                )
            queue.append((h, word))
    tiles.sort(key=lambda t: (len(t.word), t.word))
    log.debug("explored %d tiles", len(tiles))
    return Tessellation(space, tiles, window, tol, base=P)


def cell_generated_by(x: Point, tess: Tessellation) -> Cell:
    return tess.cell_at(x.canonical)


def classify_cells(tess: Tessellation, tile: int = 0):
    """(sides, edges) of the given tile, default the fundamental polyhedron."""
    return tess.side_cells(tile), tess.edge_cells(tile)


def edge_loop(E: Cell, S: Cell, T: int, tess: Tessellation) -> list[int]:
    """Tile indices ``(T_0, ..., T_m)`` around edge ``E`` with ``T_0 = T_m = T``.

    ``T_1`` is the other tile of the side ``S``; each next tile is the
    neighbour across the side through ``E`` not used to arrive.
    """
    if T not in E.tiles or not S.tiles <= E.tiles or T not in S.tiles:
        raise IncidenceError("edge loop needs E in S in T")
    members = sorted(E.tiles)
    adj = {a: [b for b in members if tess.shares_side(a, b)] for a in members}
    for a, nb in adj.items():
        if len(nb) != 2:
            raise IncidenceError(f"tile {a} has {len(nb)} sides through the edge, expected 2")
    (first,) = S.tiles - {T}
    loop = [T, first]
    prev, cur = T, first
    while cur != T:
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
        loop.append(cur)
        if len(loop) > len(members) + 1:
            raise IncidenceError("edge loop does not close")
    if len(loop) - 1 != len(members):
        raise IncidenceError("edge loop misses tiles containing the edge")
    return loop


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, witness=None):
        self.checks[name] = {"passed": bool(passed), "witness": witness}

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c["passed"]]


def sample_window(window: Window, count: int, seed: int = 0) -> np.ndarray:
    """Seeded canonical points spread over the window."""
    rng = np.random.default_rng(seed)
    chart = window.chart()
    n = window.space.dim
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    k = d * (chart.radius * rng.random(count) ** (1.0 / n))[:, None]
    return chart.to_canonical(k)


def verify_local_tessellation(P: Polyhedron, pairings, window: Window, samples: int = 2000,
                              seed: int = 0, tess: Tessellation | None = None) -> VerificationReport:
    """Sampled coverage/disjointness plus side and edge incidence on the window."""
    report = VerificationReport()
    if tess is None:
        tess = explore_tiles(P, pairings, window)
    pts = sample_window(window, samples, seed)
    uncovered = overlap = None
    for X in pts:
        v = tess.values(X)
        if uncovered is None and not np.any(v <= tess.tol):
            uncovered = X
        if overlap is None and np.sum(v < -tess.tol) > 1:
            overlap = X
    to_json = lambda X: [float(c) for c in tess.space.from_canonical(X)]  # noqa: E731
    report.add("coverage", uncovered is None, None if uncovered is None else to_json(uncovered))
    report.add("disjointness", overlap is None, None if overlap is None else to_json(overlap))

    sides = tess.side_cells(0)
    faces = {tess.side_face(0, s) for s in sides}
    missing = [r for r in range(len(tess.rows(0))) if r not in faces]
    report.add("sides", not missing, {"unpaired_faces": missing} if missing else None)

    bad_pairings = []
    for idx, g in enumerate(pairings):
        j = tess.index_of(g)
        if j is None or not tess.shares_side(0, j):
            bad_pairings.append(idx)
    report.add("pairings", not bad_pairings,
               {"pairings": bad_pairings} if bad_pairings else None)

    bad_edges = []
    try:
        edges = tess.edge_cells(0)
    except GeometryError as exc:
        edges = []
        bad_edges.append(str(exc))
    for E in edges:
        for a in sorted(E.tiles):
            deg = sum(tess.shares_side(a, b) for b in E.tiles if b != a)
            if deg != 2:
                bad_edges.append({"edge": list(E.key), "tile": a, "sides": deg})
                break
    report.add("edges", not bad_edges, bad_edges or None)
    return report
