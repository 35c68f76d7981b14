"""Standard discrete groups with their fundamental polyhedra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Isometry, Point, Space
from .polyhedra import HalfSpace, Polyhedron
from .tessellation import Window


@dataclass
class Fixture:
    name: str
    space: Space
    polyhedron: Polyhedron
    pairings: list
    names: list
    window: Window
    basepoint: Point


def dihedral(n: int, radius: float = 1.0) -> Fixture:
    """Wedge of angle pi/n at the origin with the reflections in its two walls."""
    E = Space("euclidean", 2)
    th = np.pi / n
    walls = [HalfSpace.from_normal(E, [0.0, -1.0]),
             HalfSpace.from_normal(E, [-np.sin(th), np.cos(th)])]
    P = Polyhedron(E, walls)
    refl = [Isometry.reflection(z) for z in walls]
    inside = Point(E, [np.cos(th / 2) / 2, np.sin(th / 2) / 2])
    return Fixture(f"D{2 * n}", E, P, refl, ["r1", "r2"], Window(Point(E, [0.0, 0.0]), radius), inside)


def lattice(dim: int = 2, radius: float | None = None) -> Fixture:
    """Unit cube centered at the origin with the integer translations."""
    E = Space("euclidean", dim)
    walls = []
    for i in range(dim):
        e = np.eye(dim)[i]
        walls += [HalfSpace.from_normal(E, e, 0.5), HalfSpace.from_normal(E, -e, 0.5)]
    gens, names = [], []
    for i in range(dim):
        e = np.eye(dim)[i]
        gens += [Isometry.translation(E, e), Isometry.translation(E, -e)]
        names += [f"t{i + 1}", f"t{i + 1}^-1"]
    origin = Point(E, np.zeros(dim))
    if radius is None:
        radius = 1.1 if dim == 2 else 1.0
    return Fixture(f"Z{dim}", E, Polyhedron(E, walls), gens, names, Window(origin, radius), origin)


PSL2Z_S = np.array([[0.0, -1.0], [1.0, 0.0]])
PSL2Z_T = np.array([[1.0, 1.0], [0.0, 1.0]])


def modular(radius: float = 2.0) -> Fixture:
    """The modular group with its classical domain, windowed around 2i."""
    H = Space("hyperbolic", 2, "half-space")
    inside = Point(H, [0.0, 2.0])
    walls = [
        HalfSpace.through(H, [Point(H, [0.5, 1.0]), Point(H, [0.5, 2.0])], inside),
        HalfSpace.through(H, [Point(H, [-0.5, 1.0]), Point(H, [-0.5, 2.0])], inside),
        HalfSpace.through(H, [Point(H, [0.0, 1.0]), Point(H, [0.6, 0.8])], inside),
    ]
    P = Polyhedron(H, walls, center=inside.canonical)
    S = Isometry.from_mobius(H, PSL2Z_S)
    T = Isometry.from_mobius(H, PSL2Z_T)
    gens = [S, T, T.inverse()]
    return Fixture("PSL2Z", H, P, gens, ["s", "t", "t^-1"], Window(inside, radius), inside)


def fixtures_2d() -> list[Fixture]:
    return [dihedral(3), dihedral(4), lattice(2), modular()]
