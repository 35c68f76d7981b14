import hashlib
import re

import numpy as np
import pytest

from poincare import groups
from poincare.geometry import GeometryError
from poincare.svg import PALETTE, clip_polygon, render_svg
from poincare.tessellation import Window, explore_tiles

# frozen from a reviewed rendering; any change to drawing output must update these
FROZEN = {
    "D6": "c69c44932ad2cb7768d39088b3fcd661c0a39f1885f0f64d7754ef5fb588be9d",
    "Z2": "e373fea25199c40239c16c8e722eef12847dd796776c97c3bb380b84baeaf5f9",
}


def side_colors(svg):
    return set(re.findall(r'stroke="(#[0-9a-f]+)"', svg)) & set(PALETTE)


@pytest.mark.parametrize("name", ["D6", "Z2"])
def test_frozen_drawing(analyses, name):
    _, an = analyses(name)
    svg = render_svg(an.tessellation, an.pairings)
    assert len(side_colors(svg)) == 2
    assert hashlib.sha256(svg.encode()).hexdigest() == FROZEN[name]


def test_window_inside_interior_is_one_region():
    fx = groups.dihedral(3)
    tess = explore_tiles(fx.polyhedron, fx.pairings, Window(fx.basepoint, 0.01))
    svg = render_svg(tess)
    assert svg.count("<polygon") == 1 and side_colors(svg) == set()


def test_hyperbolic_drawing_is_finite(analyses):
    _, an = analyses("PSL2Z")
    svg = render_svg(an.tessellation, an.pairings)
    assert "nan" not in svg and "inf" not in svg


def test_three_dimensional_rejected(analyses):
    _, an = analyses("Z3")
    with pytest.raises(GeometryError):
        render_svg(an.tessellation)


def test_clip_polygon():
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    half = clip_polygon(square, np.array([1.0, 0.0]), 0.5)
    assert sorted(map(tuple, np.round(half, 12))) == [(0, 0), (0, 1), (0.5, 0), (0.5, 1)]
    assert len(clip_polygon(square, np.array([1.0, 0.0]), -1.0)) == 0
