"""From generators alone to a domain, a presentation and a picture."""

from pathlib import Path

from poincare import groups
from poincare.dirichlet import GroupInput, dirichlet_domain
from poincare.geometry import Isometry, Point
from poincare.io import close_under_inverse
from poincare.presentation import analyze
from poincare.svg import render_svg
from poincare.tessellation import Window

fx = groups.modular()
H2 = fx.space
S = Isometry.from_mobius(H2, groups.PSL2Z_S)
T = Isometry.from_mobius(H2, groups.PSL2Z_T)
base = Point(H2, [0.0, 2.0])

dom = dirichlet_domain(GroupInput(H2, [S, T], base, ["s", "t"], word_radius=3))
print(f"domain has {len(dom.polyhedron.halfspaces)} faces, stable: {dom.stable}")

an = analyze(dom.polyhedron, close_under_inverse(dom.elements), Window(base, 2.0))
print("presentation:", an.presentation)

out = Path(__file__).with_name("modular.svg")
out.write_text(render_svg(an.tessellation, an.pairings))
print("wrote", out.name)
