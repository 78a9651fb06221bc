import pytest

from genwords import random_bar_word, random_walk
from smkit.bands import (
    BandError, Band, Cell, band_text, theta_band, trapezium, trapezium_text,
    verify_band, verify_trapezium,
)
from smkit.derive import bar_conjugated_insertion
from smkit.hardware import BaseLetter
from smkit.smachine import NotApplicable
from smkit.words import Coord, parse_rule, parse_word

B = BaseLetter


def mixed_word(hw, W):
    flat = W.flat() if hasattr(W, "flat") else W
    return hw.parse_admissible(flat, "mixed")


class TestBarBands:
    def test_t12_band_shape(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w(((1, 1), (2, 1)), flavor="bar"))
        band = theta_band(pres, mixed, W, parse_rule("~t12(r1)"))
        assert verify_band(band, pres, mixed) == []
        assert band.bottom == W.flat()
        assert band.top == mixed.apply(parse_rule("~t12(r1)"), W).flat()
        k_cells = [c for c in band.cells if c.kind == "bar_main"]
        a_cells = [c for c in band.cells if c.kind == "bar_theta_a"]
        assert len(k_cells) == 33
        # one tape cell per tape letter; the hub-shaped word with empty
        # P-zones would have none
        assert len(a_cells) == sum(len(i) for i in W.inners)

    def test_hub_word_band_has_no_tape_cells(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w((), flavor="bar"))
        band = theta_band(pres, mixed, W, parse_rule("~t12(r2)"))
        assert [c.kind for c in band.cells] == ["bar_main"] * 33
        assert verify_band(band, pres, mixed) == []

    def test_top_equals_run_result(self, hw, mixed, pres, rng):
        for _ in range(10):
            W = mixed_word(hw, random_bar_word(hw, rng, maxlen=1,
                                               coord=Coord(None, 1),
                                               empty_kinds="KR"))
            for rid in (parse_rule("~t1(e,1)"), parse_rule("~t12(r1)")):
                if mixed.applicable(rid, W) is not None:
                    continue
                band = theta_band(pres, mixed, W, rid)
                assert band.top == mixed.apply(rid, W).flat()
                assert verify_band(band, pres, mixed) == []


class TestStrictBands:
    def test_single_P_cell(self, hw, mixed, pres):
        W = hw.parse_admissible(parse_word("P1(e,1)"), "mixed")
        band = theta_band(pres, mixed, W, parse_rule("t1(e,1)"))
        assert len(band.cells) == 1
        cell = band.cells[0]
        assert cell.kind == "main"
        assert verify_band(band, pres, mixed) == []
        # the boundary is the main relator for (t1(e,1), P_j): the top
        # carries the x-decorated a-letters around P
        from smkit.presentation import normalize_relator
        rel = pres.index()[normalize_relator(cell.boundary())]
        assert rel.kind == "main" and rel.at == B("P", 1)
        assert rel.rule == parse_rule("t1(e,1)")

    def test_sigma_band_bottom_is_alpha_image(self, hw, mixed, pres):
        from smkit.presentation import alpha
        W = mixed_word(hw, hw.sigma_w(((1, 1),)))
        rid = parse_rule("t1(e,1)")
        band = theta_band(pres, mixed, W, rid)
        assert band.bottom == alpha(rid, W.flat())
        assert verify_band(band, pres, mixed) == []

    def test_mirror_band(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w(((1, 1),)))
        rid = parse_rule("t1(e,1)")
        W2 = mixed.apply(rid, W)
        band = theta_band(pres, mixed, W2, rid.inverse)
        assert verify_band(band, pres, mixed) == []
        fwd = theta_band(pres, mixed, W, rid)
        assert band.bottom == fwd.top and band.top == fwd.bottom

    def test_not_applicable_raises(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w(()))
        with pytest.raises(NotApplicable):
            theta_band(pres, mixed, W, parse_rule("t23(r1)"))


class TestTamper:
    def test_tampered_cell_is_located(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w(((1, 1),), flavor="bar"))
        band = theta_band(pres, mixed, W, parse_rule("~t12(r1)"))
        cells = list(band.cells)
        c = cells[3]
        cells[3] = Cell(c.kind, c.left, c.right, c.bottom,
                        c.top * parse_word("~a1(P2)") * parse_word("~a1(P2)^-1"),
                        c.dir)
        cells[3] = Cell(c.kind, c.left, c.right,
                        parse_word("~a2(P3)"), c.top, c.dir)
        broken = Band(band.rid, tuple(cells), band.bottom, band.top, band.base)
        report = verify_band(broken, pres, mixed)
        assert any("cell 3" in line for line in report)

    def test_wrong_kind_reported(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w((), flavor="bar"))
        band = theta_band(pres, mixed, W, parse_rule("~t12(r1)"))
        cells = list(band.cells)
        c = cells[0]
        cells[0] = Cell("bar_theta_a", c.left, c.right, c.bottom, c.top, c.dir)
        broken = Band(band.rid, tuple(cells), band.bottom, band.top, band.base)
        assert any("kind" in line for line in verify_band(broken, pres, mixed))


class TestTrapezia:
    def test_height_one(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w(((1, 1),), flavor="bar"))
        trap = trapezium(pres, mixed, W, (parse_rule("~t12(r2)"),))
        assert trap.height == 1
        assert verify_trapezium(trap, pres, mixed) == []

    def test_bar_insertion_trapezium(self, hw, mixed, pres):
        h = bar_conjugated_insertion(hw, ((1, 1),), ((2, -1),), 1)
        W = mixed_word(hw, hw.sigma_w(((1, 1),), flavor="bar"))
        trap = trapezium(pres, mixed, W, h)
        assert trap.height == len(h)
        assert verify_trapezium(trap, pres, mixed) == []
        wp = ((1, 1), (2, -1), (1, 1), (2, 1), (2, 1))
        assert trap.top == hw.sigma_w(wp, flavor="bar").flat()

    def test_side_words_spell_history(self, hw, mixed, pres):
        h = (parse_rule("~t12(r1)"), parse_rule("~t2(r1,1)^-1"))
        W = mixed_word(hw, hw.sigma_w((), flavor="bar"))
        trap = trapezium(pres, mixed, W, h)
        left, right = trap.side_words()
        assert [sym.rule for sym, _ in left] == [rid.positive for rid in h]
        assert [s for _, s in left] == [rid.sign for rid in h]

    def test_requires_reduced_history(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w((), flavor="bar"))
        h = (parse_rule("~t12(r1)"), parse_rule("~t12(r1)^-1"))
        with pytest.raises(BandError):
            trapezium(pres, mixed, W, h)

    def test_requires_bar_rules(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w(()))
        with pytest.raises(BandError):
            trapezium(pres, mixed, W, (parse_rule("t12(r1)"),))

    def test_requires_K_type_ends(self, hw, mixed, pres):
        w = parse_word("L1(e,1) P1(e,1) R1(e,1)")
        W = hw.parse_admissible(w, "mixed")
        with pytest.raises(BandError):
            trapezium(pres, mixed, W, (parse_rule("~t12(r1)"),))

    def test_random_bar_trapezia(self, hw, mixed, pres, rng):
        built = 0
        while built < 12:
            W0 = random_bar_word(hw, rng, maxlen=1)
            Wm = mixed_word(hw, W0)
            h, words = random_walk(mixed, Wm, rng, rng.randrange(1, 5),
                                   allow=lambda r: r.bar)
            if not h:
                continue
            trap = trapezium(pres, mixed, Wm, h)
            assert verify_trapezium(trap, pres, mixed) == []
            assert trap.top == words[-1].flat()
            built += 1


class TestSerialization:
    def test_band_text_deterministic(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w((), flavor="bar"))
        band = theta_band(pres, mixed, W, parse_rule("~t12(r1)"))
        t1 = band_text(band)
        t2 = band_text(theta_band(pres, mixed, W, parse_rule("~t12(r1)")))
        assert t1 == t2
        assert t1.startswith("band ~t12(r1) cells=33")

    def test_trapezium_text(self, hw, mixed, pres):
        W = mixed_word(hw, hw.sigma_w((), flavor="bar"))
        trap = trapezium(pres, mixed, W, (parse_rule("~t12(r1)"),))
        text = trapezium_text(trap)
        assert text.startswith("trapezium height=1")
        assert "band ~t12(r1)" in text
