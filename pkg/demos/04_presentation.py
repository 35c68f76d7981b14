"""Generators and relations read off from side pairings and edge cycles."""

from poincare import groups
from poincare.presentation import analyze

for fx in groups.fixtures_2d() + [groups.lattice(3)]:
    an = analyze(fx.polyhedron, fx.pairings, fx.window)
    print(f"{fx.name}: {an.presentation}")
    for cyc in an.cycles:
        print(f"    edge cycle of length {cyc.k}, closes after {cyc.t} turn(s): {cyc.relation}")
