"""Paths through the tessellation: kappa, adapted lists, Phi and factorization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import TOL_GEOM, GeometryError, Isometry, Point, iso_eq
from .polyhedra import AffineChart
from .tessellation import Cell, IncidenceError, Tessellation, segment_interval
from .words import Word


class PathError(GeometryError):
    pass


def tile_letter(tess: Tessellation, pairings, g: int, h: int) -> Word:
    """The letter ``[g^-1 h]`` for adjacent tiles ``g`` and ``h``."""
    elem = tess[g].element.inverse() @ tess[h].element
    j = tess.index_of(elem)
    for sp in pairings:
        if sp.tile == j:
            return sp.letter
    raise IncidenceError(f"tiles {g} and {h} are not adjacent across a side")


def _loop_from(E: Cell, g: int, tess: Tessellation) -> list[int]:
    members = sorted(E.tiles)
    adj = {a: [b for b in members if tess.shares_side(a, b)] for a in members}
    for a, nb in adj.items():
        if len(nb) != 2:
            raise IncidenceError(f"tile {a} has {len(nb)} sides through the edge, expected 2")
    loop, prev, cur = [g], g, adj[g][0]
    while cur != g:
        loop.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
        if len(loop) > len(members):
            raise IncidenceError("edge loop does not close")
    return loop + [g]


def kappa(C: Cell, g: int, h: int, tess: Tessellation, pairings) -> Word:
    """Word attached to passing from tile ``g`` to tile ``h`` at cell ``C``."""
    if g not in C.tiles or h not in C.tiles:
        raise GeometryError("cell is not contained in both tiles")
    if g == h:
        return Word()
    if C.codim == 1:
        return tile_letter(tess, pairings, g, h)
    if C.codim != 2:
        raise PathError(f"kappa is undefined at a cell of codimension {C.codim}")
    loop = _loop_from(C, g, tess)
    m = len(loop) - 1
    p = loop.index(h)
    walk = loop[: p + 1] if p <= m - p else loop[p:][::-1]
    w = Word()
    for a, b in zip(walk, walk[1:]):
        w = w * tile_letter(tess, pairings, a, b)
    return w


@dataclass
class AdaptedList:
    breakpoints: list  # a_0 < ... < a_n
    tiles: list  # g_1 .. g_n as tile indices
    cells: list  # cells at interior breakpoints a_1 .. a_{n-1}
    path: np.ndarray  # canonical waypoints

    def point(self, a: float) -> np.ndarray:
        return path_point(self.path, a)


def path_point(path, a: float) -> np.ndarray:
    i = min(int(np.floor(a)), len(path) - 2)
    s = a - i
    return (1 - s) * path[i] + s * path[i + 1]


def build_adapted_list(path, tess: Tessellation) -> AdaptedList:
    """Adapted list for the piecewise geodesic through canonical ``path`` waypoints.

    The parameter runs over ``[0, len(path) - 1]``, one unit per segment.
    """
    space = tess.space
    path = np.array([space.normalize(np.asarray(X, dtype=float)) for X in path])
    if len(path) == 1:
        path = np.vstack([path, path])
    cuts = set()
    for i in range(len(path) - 1):
        A, B = path[i], path[i + 1]
        cuts.update((i, i + 1))
        for j in range(len(tess)):
            iv = segment_interval(tess.rows(j), A, B)
            if iv is not None:
                cuts.update(i + s for s in iv if 0 < s < 1)
    ts = sorted(cuts)
    ts = [t for k, t in enumerate(ts) if k == 0 or t - ts[k - 1] > 1e-12]
    pieces = []
    for t0, t1 in zip(ts, ts[1:]):
        X = space.normalize(path_point(path, 0.5 * (t0 + t1)))
        try:
            cell = tess.cell_at(X)
        except GeometryError as exc:
            raise PathError(f"path leaves the explored window near parameter {t0:.6g}") from exc
        pieces.append([t0, t1, min(cell.tiles), cell.tiles])
    merged = [pieces[0]]
    for p in pieces[1:]:
        if p[3] == merged[-1][3]:
            merged[-1][1] = p[1]
        else:
            merged.append(p)
    cells = []
    for left, right in zip(merged, merged[1:]):
        a = left[1]
        cell = tess.cell_at(space.normalize(path_point(path, a)))
        if cell.codim > 2:
            raise PathError(f"path meets a cell of codimension {cell.codim} at parameter {a:.6g}")
        if left[2] not in cell.tiles or right[2] not in cell.tiles:
            raise PathError(f"breakpoint {a:.6g} is not shared by its neighbouring tiles")
        cells.append(cell)
    breakpoints = [merged[0][0]] + [p[1] for p in merged]
    return AdaptedList(breakpoints, [p[2] for p in merged], cells, path)


def phi(L: AdaptedList, tess: Tessellation, pairings) -> Word:
    w = Word()
    for cell, g, h in zip(L.cells, L.tiles, L.tiles[1:]):
        w = w * kappa(cell, g, h, tess, pairings)
    return w


@dataclass
class Factorization:
    word: Word
    retries: int


def _walk(space, P_rows, pairings, path, tol):
    """Side-crossing letters along ``path`` starting in the base tile."""
    h_inv = None
    letters = []
    elem = None
    for i in range(len(path) - 1):
        A, B = path[i], path[i + 1]
        s = 0.0
        for _ in range(10000):
            M = P_rows if h_inv is None else P_rows @ h_inv
            iv = segment_interval(M, A, B, tol=0.0)
            if iv is None or iv[0] > s + 1e-9 or iv[1] < s - 1e-9:
                return None
            if iv[1] >= 1.0 - 1e-12:
                break
            s_exit = iv[1]
            Z = space.normalize((1 - s_exit) * A + s_exit * B)
            Y = Z if h_inv is None else space.normalize(h_inv @ Z)
            vals = P_rows @ Y
            scale = max(1.0, float(np.max(np.abs(Y))))
            active = np.nonzero(np.abs(vals) <= tol * scale)[0]
            if len(active) != 1:
                return None
            cands = [sp for sp in pairings if sp.face == active[0]
                     and np.max(sp.neighbor_rows @ Y) <= tol * scale]
            if len(cands) != 1:
                return None
            sp = cands[0]
            letters.append(sp.letter.letters[0])
            elem = sp.gamma if elem is None else elem @ sp.gamma
            h_inv = elem.inverse().matrix
            # the new tile must carry the path onward
            iv2 = segment_interval(P_rows @ h_inv, A, B, tol=0.0)
            if iv2 is None or iv2[1] <= s_exit + 1e-12:
                return None
            s = s_exit
        else:
            return None
    return Word(tuple(letters)), elem


def factor_element(g: Isometry, P, pairings, basepoint=None, seed: int = 0,
                   retries: int = 16, tol: float = TOL_GEOM) -> Factorization:
    """Word in the side pairings evaluating to ``g``.

    Walks from the basepoint to its image, crossing one side at a time. The
    middle waypoint is jittered with a seeded generator when the straight
    path meets a lower-dimensional cell.
    """
    space = P.space
    x0 = P.center if basepoint is None else (
        basepoint.canonical if isinstance(basepoint, Point) else space.normalize(basepoint))
    if np.max(P.rows @ x0) > -tol:
        raise GeometryError("basepoint must lie in the interior of P")
    y0 = g.act(x0)
    chart = AffineChart(space, x0)
    k0, k1 = chart.to_chart(x0), chart.to_chart(y0)
    rng = np.random.default_rng(seed)
    bindings = {sp.symbol: sp.gamma for sp in pairings if sp.exponent == 1}
    for attempt in range(retries + 1):
        mid = 0.5 * (k0 + k1)
        if attempt:
            scale = 10 * tol * 10 ** (attempt - 1)
            mid = mid + rng.uniform(-scale, scale, size=mid.shape) * max(1.0, np.linalg.norm(k1))
        path = [x0, chart.to_canonical(mid), y0]
        out = _walk(space, P.rows, pairings, path, tol)
        if out is None:
            continue
        word, _ = out
        if iso_eq(word.evaluate(bindings, space), g, 1e-8):
            return Factorization(word, attempt)
    raise PathError("factorization failed: path construction exhausted its retries")
