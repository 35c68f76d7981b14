import numpy as np
import pytest

from poincare.geometry import GeometryError, Isometry, Point, iso_eq
from poincare.paths import (
    PathError,
    build_adapted_list,
    factor_element,
    kappa,
    phi,
    tile_letter,
)
from poincare.tessellation import sample_window
from poincare.words import Word


def pt(fx, xy):
    return Point(fx.space, xy).canonical


class TestKappa:
    def test_around_dihedral_apex(self, analyses):
        fx, an = analyses("D6")
        tess = an.tessellation
        (E,) = an.edges
        got = [str(kappa(E, 0, h, tess, an.pairings)) for h in range(6)]
        # the opposite tile is a tie and is reached walking forward
        assert got == ["1", "a", "b", "a*b", "b*a", "a*b*a"]
        for h in range(1, 6):
            w = kappa(E, 0, h, tess, an.pairings)
            assert iso_eq(w.evaluate(an.presentation.bindings), tess[h].element)

    def test_codim_one_is_a_single_letter(self, analyses):
        _, an = analyses("Z2")
        tess = an.tessellation
        for sp in an.pairings:
            assert kappa(sp.side, 0, sp.tile, tess, an.pairings) == sp.letter
            assert tile_letter(tess, an.pairings, 0, sp.tile) == sp.letter

    def test_codim_zero_is_empty(self, analyses):
        fx, an = analyses("Z2")
        C = an.tessellation.cell_at(fx.basepoint.canonical)
        assert kappa(C, 0, 0, an.tessellation, an.pairings) == Word()

    def test_cell_must_lie_in_both_tiles(self, analyses):
        _, an = analyses("Z2")
        sp = an.pairings[0]
        with pytest.raises(GeometryError):
            kappa(sp.side, 0, an.pairings[2].tile, an.tessellation, an.pairings)


class TestAdaptedList:
    def test_crossing_one_side(self, analyses):
        fx, an = analyses("Z2")
        L = build_adapted_list([pt(fx, [0.0, 0.1]), pt(fx, [0.9, 0.1])], an.tessellation)
        assert len(L.tiles) == 2 and L.tiles[0] == 0
        assert L.breakpoints[1] == pytest.approx(0.5 / 0.9)
        assert L.cells[0].codim == 1

    def test_through_a_corner(self, analyses):
        fx, an = analyses("Z2")
        tess = an.tessellation
        L = build_adapted_list([pt(fx, [0.25, 0.25]), pt(fx, [0.75, 0.75])], tess)
        assert [c.codim for c in L.cells] == [2]
        w = phi(L, tess, an.pairings)
        assert len(w) == 2
        assert iso_eq(w.evaluate(an.presentation.bindings), Isometry.translation(fx.space, [1.0, 1.0]))

    def test_constant_path(self, analyses):
        fx, an = analyses("Z2")
        L = build_adapted_list([fx.basepoint.canonical], an.tessellation)
        assert L.tiles == [0] and phi(L, an.tessellation, an.pairings) == Word()

    def test_leaving_the_window(self, analyses):
        fx, an = analyses("Z2")
        with pytest.raises(PathError):
            build_adapted_list([fx.basepoint.canonical, pt(fx, [5.0, 0.0])], an.tessellation)


@pytest.mark.parametrize("name", ["D6", "Z2", "PSL2Z"])
def test_phi_reaches_the_final_tile(analyses, name):
    fx, an = analyses(name)
    tess = an.tessellation
    for X in sample_window(fx.window, 25, seed=3):
        L = build_adapted_list([fx.basepoint.canonical, X], tess)
        g = phi(L, tess, an.pairings).evaluate(an.presentation.bindings, fx.space)
        assert iso_eq(g, tess[L.tiles[-1]].element)


@pytest.mark.parametrize("name", ["D6", "Z2", "PSL2Z"])
def test_phi_is_path_independent(analyses, name):
    fx, an = analyses(name)
    tess, b = an.tessellation, an.presentation.bindings
    pts = sample_window(fx.window, 30, seed=11)
    x0 = fx.basepoint.canonical
    for X, M in zip(pts[:15], pts[15:]):
        direct = phi(build_adapted_list([x0, X], tess), tess, an.pairings)
        detour = phi(build_adapted_list([x0, M, X], tess), tess, an.pairings)
        assert iso_eq(direct.evaluate(b, fx.space), detour.evaluate(b, fx.space))


class TestFactor:
    @pytest.mark.parametrize("name", ["D6", "Z2", "Z3", "PSL2Z"])
    def test_round_trip(self, analyses, name):
        fx, an = analyses(name)
        b = an.presentation.bindings
        syms = an.presentation.symbols
        rng = np.random.default_rng(5)
        for _ in range(15):
            n = int(rng.integers(0, 7))
            w = Word(tuple((syms[int(rng.integers(len(syms)))], int(rng.choice([1, -1]))) for _ in range(n)))
            g = w.evaluate(b, fx.space)
            fac = factor_element(g, an.polyhedron, an.pairings, basepoint=fx.basepoint, seed=0)
            assert iso_eq(fac.word.evaluate(b, fx.space), g, 1e-8)

    def test_identity_is_empty_word(self, analyses):
        fx, an = analyses("PSL2Z")
        fac = factor_element(Isometry.identity(fx.space), an.polyhedron, an.pairings, basepoint=fx.basepoint)
        assert fac.word == Word() and fac.retries == 0

    def test_path_through_a_corner_is_jittered(self, analyses):
        fx, an = analyses("Z2")
        g = Isometry.translation(fx.space, [1.0, 1.0])
        fac = factor_element(g, an.polyhedron, an.pairings, basepoint=Point(fx.space, [0.0, 0.0]))
        assert fac.retries >= 1
        assert iso_eq(fac.word.evaluate(an.presentation.bindings), g)

    def test_basepoint_on_boundary_rejected(self, analyses):
        fx, an = analyses("Z2")
        with pytest.raises(GeometryError):
            factor_element(Isometry.identity(fx.space), an.polyhedron, an.pairings,
                           basepoint=Point(fx.space, [0.5, 0.0]))


class TestSpecExamples:
    def test_kappa_antisymmetry(self, analyses):
        _, an = analyses("D8")
        tess = an.tessellation
        (E,) = an.edges
        for g in E.tiles:
            for h in E.tiles:
                fwd = kappa(E, g, h, tess, an.pairings)
                back = kappa(E, h, g, tess, an.pairings)
                assert iso_eq(fwd.evaluate(an.presentation.bindings, tess.space),
                              back.inverse().evaluate(an.presentation.bindings, tess.space))

    def test_single_crossing_is_one_letter(self, analyses):
        fx, an = analyses("Z2")
        L = build_adapted_list([pt(fx, [0.0, 0.1]), pt(fx, [0.9, 0.1])], an.tessellation)
        (sp,) = [p for p in an.pairings if p.tile == L.tiles[1]]
        assert phi(L, an.tessellation, an.pairings) == sp.letter

    def test_loop_around_the_dihedral_vertex(self, analyses):
        fx, an = analyses("D6")
        tess = an.tessellation
        angles = np.pi / 6 + np.arange(7) * np.pi / 3
        loop = [pt(fx, [0.5 * np.cos(t), 0.5 * np.sin(t)]) for t in angles]
        L = build_adapted_list(loop, tess)
        assert sorted(set(L.tiles)) == list(range(6)) and len(L.tiles) == 7
        w = phi(L, tess, an.pairings)
        assert len(w) == 6
        assert iso_eq(w.evaluate(an.presentation.bindings), Isometry.identity(fx.space))

    def test_factor_a_pairing(self, analyses):
        fx, an = analyses("PSL2Z")
        for sp in an.pairings:
            fac = factor_element(sp.gamma, an.polyhedron, an.pairings, basepoint=fx.basepoint)
            assert fac.word == sp.letter

    def test_factor_a_rotation(self, analyses):
        fx, an = analyses("D8")
        b = an.presentation.bindings
        g = (b["a"] @ b["b"]) ** 2
        fac = factor_element(g, an.polyhedron, an.pairings, basepoint=fx.basepoint)
        assert iso_eq(fac.word.evaluate(b), g)
        assert len(fac.word.reduced()) == 4
