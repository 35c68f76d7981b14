"""Writing a group element as a word in the side pairings."""

import numpy as np

from poincare import groups
from poincare.geometry import Isometry, iso_eq
from poincare.paths import factor_element
from poincare.presentation import analyze

fx = groups.modular()
an = analyze(fx.polyhedron, fx.pairings, fx.window)
pres = an.presentation
print("presentation:", pres)

# z -> (2z + 1) / (z + 1)
g = Isometry.from_mobius(fx.space, np.array([[2.0, 1.0], [1.0, 1.0]]))
fac = factor_element(g, an.polyhedron, an.pairings, basepoint=fx.basepoint)
print("factorization:", fac.word, f"(retries {fac.retries})")
print("word evaluates back to g:", iso_eq(fac.word.evaluate(pres.bindings, fx.space), g))
