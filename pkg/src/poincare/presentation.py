"""Side pairings, edge cycles and the resulting finite presentation."""

from __future__ import annotations

import logging
import string
from dataclasses import dataclass, field

import numpy as np

from .geometry import TOL_GEOM, GeometryError, Isometry, _probe_points, is_identity, iso_eq, order
from .polyhedra import Polyhedron
from .tessellation import (
    DEFAULT_CAP,
    Cell,
    IncidenceError,
    Tessellation,
    Window,
    edge_loop,
    explore_tiles,
)
from .words import Relation, Word, canonical_cyclic

log = logging.getLogger(__name__)


class ValidationError(GeometryError):
    """Input or result failed a consistency check; ``code`` and ``detail`` are machine-readable."""

    def __init__(self, code: str, message: str, **detail):
        super().__init__(message)
        self.code = code
        self.detail = detail


def symbol_name(i: int) -> str:
    letters = string.ascii_lowercase
    return letters[i] if i < len(letters) else f"x{i}"


@dataclass(eq=False)
class SidePairing:
    """Side ``S = P cap gamma(P)`` with its pairing transformation ``gamma``."""

    index: int
    side: Cell
    gamma: Isometry
    tile: int
    face: int
    partner: int = -1
    symbol: str = ""
    exponent: int = 1
    neighbor_rows: np.ndarray = field(default=None, repr=False)

    @property
    def self_paired(self) -> bool:
        return self.partner == self.index

    @property
    def letter(self) -> Word:
        return Word.letter(self.symbol, self.exponent)


def side_pairings(tess: Tessellation, sides=None, candidates=None) -> list[SidePairing]:
    """One pairing per side of the base tile, with symbols assigned per pair.

    ``gamma`` is the element of the neighbour tile across the side. When
    ``candidates`` is given every gamma must be among them.
    """
    if sides is None:
        sides = tess.side_cells(0)
    out = []
    for idx, S in enumerate(sides):
        (j,) = S.tiles - {0}
        g = tess[j].element
        if g is None:
            raise GeometryError("side pairings need tiles with group elements")
        if candidates is not None:
            hits = [c for c in candidates if iso_eq(c, g, 1e-6)]
            if not hits:
                raise ValidationError("side_without_pairing", f"side {idx} has no candidate pairing",
                                      side=idx)
        out.append(SidePairing(idx, S, g, j, tess.side_face(0, S), neighbor_rows=tess.rows(j)))
    by_tile = {sp.tile: sp for sp in out}
    for sp in out:
        k = tess.index_of(sp.gamma.inverse())
        if k is None or k not in by_tile:
            raise IncidenceError(f"side {sp.index} has no partner side inside the window")
        sp.partner = by_tile[k].index
    count = 0
    for sp in out:
        if sp.symbol:
            continue
        sp.symbol, sp.exponent = symbol_name(count), 1
        count += 1
        partner = out[sp.partner]
        if partner is not sp:
            partner.symbol, partner.exponent = sp.symbol, -1
    return out


@dataclass(eq=False)
class EdgeCycle:
    edges: list
    sides: list
    k: int
    t: int
    m: int
    product: Isometry

    @property
    def word(self) -> Word:
        w = Word()
        for sp in self.sides:
            w = w * sp.letter
        return w

    @property
    def relation(self) -> Relation:
        return Relation(self.word, self.t)


def _sides_through(E: Cell, pairings) -> list:
    return [sp for sp in pairings if sp.side.tiles <= E.tiles]


def edge_cycle(E: Cell, S: SidePairing, pairings, tess: Tessellation, edges=None,
               cap: int = 1000) -> EdgeCycle:
    """Follow ``E_{n+1} = gamma_{S_n}^{-1}(E_n)`` until ``(E_1, S_1)`` recurs."""
    if edges is None:
        edges = tess.edge_cells(0)
    known = {e.tiles: e for e in edges}
    if not S.side.tiles <= E.tiles:
        raise IncidenceError("starting side does not contain the edge")
    cyc_edges, cyc_sides = [E], [S]
    cur_E, cur_S = E, S
    for _ in range(2 * len(edges) + 2):
        X = cur_S.gamma.inverse().act(cur_E.representative)
        nxt = tess.cell_at(X)
        if nxt.tiles not in known:
            raise IncidenceError("edge chain leaves the edge set of P")
        nxt = known[nxt.tiles]
        through = _sides_through(nxt, pairings)
        if len(through) != 2:
            raise IncidenceError(f"edge lies on {len(through)} sides of P, expected 2")
        partner = pairings[cur_S.partner]
        if partner not in through:
            raise IncidenceError("paired side does not contain the image edge")
        other = through[0] if through[1] is partner else through[1]
        if nxt.tiles == E.tiles and other is S:
            break
        cyc_edges.append(nxt)
        cyc_sides.append(other)
        cur_E, cur_S = nxt, other
    else:
        raise IncidenceError("edge cycle did not close")
    k = len(cyc_sides)
    g = cyc_sides[0].gamma
    for sp in cyc_sides[1:]:
        g = g @ sp.gamma
    t = order(g, cap=cap)
    if t is None:
        raise ValidationError("cycle_order", f"cycle product has no finite order below {cap}")
    m = len(edge_loop(E, S.side, 0, tess)) - 1
    if m != k * t:
        raise ValidationError("cycle_exponent",
                              f"edge loop length {m} differs from k*t = {k}*{t}", k=k, t=t, m=m)
    return EdgeCycle(cyc_edges, cyc_sides, k, t, m, g)


@dataclass(eq=False)
class Presentation:
    generators: list  # (symbol, Isometry) pairs
    relations: list  # Relation objects
    pairings: list = field(default_factory=list)
    cycles: list = field(default_factory=list)

    @property
    def symbols(self) -> list[str]:
        return [s for s, _ in self.generators]

    @property
    def bindings(self) -> dict:
        return dict(self.generators)

    def residuals(self) -> list[float]:
        """Maximum probe displacement of each relation's evaluation."""
        space = self.generators[0][1].space if self.generators else None
        out = []
        for rel in self.relations:
            g = rel.evaluate(self.bindings, space)
            P = _probe_points(space)
            out.append(float(np.max(space.canonical_distance(g.act(P), P))))
        return out

    def __str__(self):
        gens = ", ".join(self.symbols)
        rels = ", ".join(str(r) for r in self.relations)
        return f"< {gens} | {rels} >"


def build_presentation(tess: Tessellation, sides=None, edges=None, pairings=None,
                       tol: float = 1e-8) -> Presentation:
    """Generators from side pairings, reflection relations and one relation per edge cycle."""
    if pairings is None:
        pairings = side_pairings(tess, sides)
    if edges is None:
        edges = tess.edge_cells(0)
    gens = []
    for sp in pairings:
        if sp.exponent == 1 and sp.symbol not in dict(gens):
            gens.append((sp.symbol, sp.gamma))
    order_map = {s: i for i, (s, _) in enumerate(gens)}
    reflections = [Relation(sp.letter, 2) for sp in pairings if sp.self_paired]
    cycles, consumed = [], set()
    for E in edges:
        if E.tiles in consumed:
            continue
        through = _sides_through(E, pairings)
        if len(through) != 2:
            raise IncidenceError(f"edge lies on {len(through)} sides of P, expected 2")
        cyc = edge_cycle(E, through[0], pairings, tess, edges)
        consumed.update(e.tiles for e in cyc.edges)
        cycles.append(cyc)
    cyc_rels = []
    for cyc in cycles:
        rel = Relation(canonical_cyclic(cyc.word, order_map), cyc.t)
        cyc_rels.append(rel)
    cyc_rels.sort(key=lambda r: (len(r), [(order_map[s], 0 if e == 1 else 1) for s, e in r.word]))
    reflections.sort(key=lambda r: order_map[r.word.letters[0][0]])
    pres = Presentation(gens, reflections + cyc_rels, pairings, cycles)
    space = tess.space
    for rel in pres.relations:
        g = rel.evaluate(pres.bindings, space)
        if not is_identity(g, tol):
            P = _probe_points(space)
            res = float(np.max(space.canonical_distance(g.act(P), P)))
            raise ValidationError("relation_not_identity", f"relation {rel} evaluates to a non-identity",
                                  relation=str(rel), residual=res)
    return pres


@dataclass(eq=False)
class Analysis:
    """Everything derived from a fundamental polyhedron and its pairings."""

    polyhedron: Polyhedron
    tessellation: Tessellation
    sides: list
    edges: list
    pairings: list
    presentation: Presentation
    window: Window

    @property
    def cycles(self):
        return self.presentation.cycles


def check_pairings(P: Polyhedron, pairings, window: Window, names=None, faces=None,
                   tol: float = TOL_GEOM):
    """Each given pairing must map P onto a neighbour sharing a side with it.

    ``faces`` optionally names the half-space each pairing is meant to pair.
    """
    if faces is not None:
        flags = P.essential_flags()
        position = np.cumsum(flags) - 1
        for k, r in enumerate(faces):
            if r is not None and not flags[r]:
                raise ValidationError("pairing_redundant_side",
                                      f"side {r} is not an essential face of P", side=r)
        orig_faces = list(faces)
        faces = [None if r is None else int(position[r]) for r in faces]
    P = P.reduced()
    tiles = [P] + [P.transform(g) for g in pairings]
    tess = Tessellation.from_polyhedra(P.space, tiles, window, tol)
    for k, g in enumerate(pairings):
        label = names[k] if names else k
        s, _ = tess.chart.margin(np.vstack([tess.rows(0), tess.rows(k + 1)]))
        if s > tol:
            raise ValidationError("pairing_overlap", f"pairing {label} maps P onto an overlapping tile",
                                  pairing=label, side=None if faces is None else orig_faces[k])
        if not tess.shares_side(0, k + 1):
            raise ValidationError("pairing_not_side", f"pairing {label} does not pair a side of P",
                                  pairing=label, side=None if faces is None else orig_faces[k])
        if faces is not None and faces[k] is not None:
            if tess._side_point(0, faces[k], k + 1) is None:
                raise ValidationError("pairing_wrong_side",
                                      f"pairing {label} does not pair side {orig_faces[k]}",
                                      pairing=label, side=orig_faces[k])


def analyze(P: Polyhedron, pairings, window: Window, tol: float = TOL_GEOM,
            cap: int = DEFAULT_CAP, enlargements: int = 3) -> Analysis:
    """Explore, classify cells and assemble the presentation, enlarging the window if needed."""
    last = None
    for attempt in range(enlargements + 1):
        try:
            tess = explore_tiles(P, pairings, window, cap=cap, tol=tol)
            sides, edges = tess.side_cells(0), tess.edge_cells(0)
            covered = {tess.side_face(0, s) for s in sides}
            if len(covered) < len(tess.rows(0)):
                missing = [r for r in range(len(tess.rows(0))) if r not in covered]
                raise IncidenceError(f"faces {missing} of P have no side in the window")
            chart = window.chart()
            for i, j in tess.base.ridges():
                d, _ = chart.min_norm(tess.base.ridge(i, j).rows)
                if d > chart.radius + 1e-9:
                    raise IncidenceError(f"the ridge of faces {i} and {j} misses the window")
            sp = side_pairings(tess, sides)
            pres = build_presentation(tess, sides, edges, sp)
            return Analysis(tess.base, tess, sides, edges, sp, pres, window)
        except IncidenceError as exc:
            last = exc
            log.info("enlarging window after: %s", exc)
            window = window.enlarged(1.5)
    raise ValidationError("incidence", str(last))
