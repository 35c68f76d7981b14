"""Dirichlet domains of groups given by matrix generators."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .geometry import TOL, TOL_GEOM, GeometryError, Isometry, IsometrySet, Point, Space
from .polyhedra import Polyhedron, bisector

log = logging.getLogger(__name__)

# a non-identity element this close to the identity suggests a non-discrete group
NEAR_IDENTITY = 1e-3


@dataclass
class GroupInput:
    space: Space
    generators: list
    basepoint: Point
    names: list = field(default_factory=list)
    word_radius: int = 3

    def __post_init__(self):
        if not self.names:
            self.names = [f"g{i + 1}" for i in range(len(self.generators))]
        if len(self.names) != len(self.generators):
            raise ValueError("one name per generator")
        if self.word_radius < 1:
            raise ValueError("word_radius must be a positive integer")


@dataclass
class DirichletDomain:
    polyhedron: Polyhedron
    elements: list  # the g whose bisector carries each half-space
    words: list  # generator words (index tuples, negative = inverse) for each element
    stable: bool
    word_radius: int
    near_identity: list = field(default_factory=list)  # words of suspiciously small elements

    @property
    def provisional(self) -> bool:
        return not self.stable


def orbit_elements(inp: GroupInput, radius: int):
    """Distinct non-identity elements of word length <= radius, with their words."""
    gens = []
    for i, g in enumerate(inp.generators):
        gens.append((i + 1, g))
        gens.append((-(i + 1), g.inverse()))
    seen = IsometrySet()
    seen.add(Isometry.identity(inp.space))
    out = []
    frontier = deque([(Isometry.identity(inp.space), ())])
    for _ in range(radius):
        nxt = deque()
        for g, w in frontier:
            for code, h in gens:
                e = g @ h
                if seen.add(e)[1]:
                    out.append((e, w + (code,)))
                    nxt.append((e, w + (code,)))
        frontier = nxt
    return out


def _domain(inp: GroupInput, radius: int, tol: float):
    x0 = inp.basepoint
    X0 = x0.canonical
    halfspaces, elements, words = [], [], []
    orbit: list = []
    for g, w in orbit_elements(inp, radius):
        Y = g.act(X0)
        if inp.space.canonical_distance(X0, Y) < TOL * 10:
            raise GeometryError(f"basepoint is fixed by the non-identity word {w}")
        if any(np.max(np.abs(Y - Z)) < 1e-9 * max(1.0, np.max(np.abs(Y))) for Z in orbit):
            continue
        orbit.append(Y)
        halfspaces.append(bisector(x0, Point.from_canonical(inp.space, Y)))
        elements.append(g)
        words.append(w)
    P = Polyhedron(inp.space, halfspaces, center=X0, tol=tol)
    if not halfspaces:
        return P, [], []
    flags = P.essential_flags()
    keep = [i for i, f in enumerate(flags) if f]
    reduced = Polyhedron(inp.space, [halfspaces[i] for i in keep], center=X0, tol=tol)
    return reduced, [elements[i] for i in keep], [words[i] for i in keep]


def dirichlet_domain(inp: GroupInput, tol: float = TOL_GEOM) -> DirichletDomain:
    """Intersection of bisectors over the word ball, reduced, with a stability check."""
    P, elems, words = _domain(inp, inp.word_radius, tol)
    Q, _, _ = _domain(inp, inp.word_radius + 1, tol)
    stable = _same_faces(P, Q)
    if not stable:
        log.warning("Dirichlet domain not stable at word radius %d", inp.word_radius)
    near = near_identity_words(inp, inp.word_radius)
    if near:
        log.warning("%d non-identity words lie near the identity; the group may not be discrete", len(near))
    return DirichletDomain(P, elems, words, stable, inp.word_radius, near)


def near_identity_words(inp: GroupInput, radius: int, eps: float = NEAR_IDENTITY) -> list:
    """Words whose element is not the identity but within ``eps`` of it entrywise."""
    eye = np.eye(inp.space.dim + 1)
    return [w for g, w in orbit_elements(inp, radius) if np.max(np.abs(g.matrix - eye)) < eps]


def _same_faces(P: Polyhedron, Q: Polyhedron) -> bool:
    A, B = P.rows, Q.rows
    if len(A) != len(B):
        return False
    for f in A:
        if not np.any(np.max(np.abs(B - f), axis=1) < 1e-7 * max(1.0, np.max(np.abs(f)))):
            return False
    return True
