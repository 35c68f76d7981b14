"""Exploring the tiles of a group orbit that meet a window."""

from poincare import groups
from poincare.tessellation import classify_cells, explore_tiles, verify_local_tessellation

for fx in (groups.dihedral(3), groups.lattice(2), groups.modular()):
    tess = explore_tiles(fx.polyhedron, fx.pairings, fx.window)
    sides, edges = classify_cells(tess)
    report = verify_local_tessellation(fx.polyhedron, fx.pairings, fx.window, samples=300)
    print(f"{fx.name}: {len(tess)} tiles, {len(sides)} sides, {len(edges)} edges, "
          f"local tessellation check {'passed' if report.passed else 'failed'}")
