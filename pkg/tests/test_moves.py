import pytest
from hypothesis import given, settings, strategies as st

from knotctl import (
    WELDED,
    apply_move,
    apply_program,
    find_sites,
    parse_gauss,
    parse_program,
)
from knotctl.errors import StaleSite, UnknownKind
from knotctl.moves import Site, Step

import oracles

TREFOIL = "O1+,U2+,O3+,U1+,O2+,U3+"
FIG8 = "O1+,U2-,O4-,U1+,O3+,U4-,O2-,U3+"

REDUCE_KINDS = ("R1", "R2", "R3", "DELTA", "GAMMA", "X", "D13", "D24")


def locators(d, kind, direction="reduce"):
    return [s.locator for s in find_sites(d, kind, direction=direction)]


def test_trefoil_sites_frozen():
    d = parse_gauss(TREFOIL)
    assert locators(d, "R1") == []
    assert locators(d, "R2") == []
    assert locators(d, "R3") == []
    assert locators(d, "DELTA") == ["1,2,3"]
    assert locators(d, "GAMMA") == ["1,2", "1,3", "2,3"]
    assert locators(d, "X") == ["1", "2", "3"]
    assert locators(d, "D13") == []
    assert len(find_sites(d, "R1", direction="insert")) == 24
    assert len(find_sites(d, "R2", direction="insert")) == 18


def test_figure_eight_sites_frozen():
    d = parse_gauss(FIG8)
    assert locators(d, "DELTA") == ["1,2,3", "1,2,4", "1,3,4", "2,3,4"]
    assert locators(d, "GAMMA") == ["1,3", "2,4"]
    assert locators(d, "D13") == ["1,2,3,4"]
    assert locators(d, "D24") == ["1,2,3,4"]


def test_two_crossing_poke_has_one_r2_site():
    d = parse_gauss("O1+,U2+,O2+,U1+")
    sites = find_sites(d, "R2")
    assert len(sites) == 1
    out = apply_move(d, "R2", sites[0].locator)
    assert out.canonical_text() == "()"


def test_unknown_kind():
    with pytest.raises(UnknownKind):
        find_sites(parse_gauss(TREFOIL), "NOPE")


def test_sites_match_brute_matcher_on_small_codes():
    # sample sweep; the exhaustive 4-crossing comparison runs in the
    # acceptance suite
    for n in (1, 2, 3):
        for code in oracles.small_codes(n):
            if not oracles.brute_realizable(code):
                continue
            d = parse_gauss(code)
            for kind in REDUCE_KINDS:
                eng = {
                    frozenset(int(x) for x in s.locator.split(","))
                    for s in find_sites(d, kind)
                }
                assert eng == oracles.brute_sites(code, kind), (code, kind)


def test_every_listed_site_applies():
    for code in (TREFOIL, FIG8):
        d = parse_gauss(code)
        for kind in REDUCE_KINDS:
            for site in find_sites(d, kind):
                out = apply_move(d, kind, site.locator)
                assert len(out.components) == len(d.components)


def test_insertion_sites_apply_cleanly():
    d = parse_gauss(TREFOIL)
    for kind in ("R1", "R2"):
        for site in find_sites(d, kind, direction="insert"):
            out = apply_move(d, kind + "INS", site.locator)
            grew = 1 if kind == "R1" else 2
            assert len(out.classical_ids()) == 3 + grew


def test_kink_corner_triangles_are_not_offered():
    # a curled-up diagram whose would-be triangle has a curl at a corner;
    # sliding there cannot keep the diagram planar, so no site is listed
    d = parse_gauss("O1+,O6-,U6-,U2+,O3+,U4+,O5+,U1+,O2+,U3+,O4+,U5+")
    for kind in ("R3", "DELTA"):
        for site in find_sites(d, kind):
            assert "6" not in site.locator.split(",")
            apply_move(d, kind, site.locator)  # must not raise


def test_toggle_involutions_at_fixed_locator():
    d = parse_gauss(FIG8)
    for kind in ("X", "D13", "D24"):
        loc = find_sites(d, kind)[0].locator
        once = apply_move(d, kind, loc)
        back = apply_move(once, kind, loc)
        assert back.canonical_text() == d.canonical_text()
        if kind == "X":
            assert once.canonical_text() != d.canonical_text()


def test_x_toggle_changes_writhe_by_two():
    d = parse_gauss(TREFOIL)
    out = apply_move(d, "X", "2")
    assert out.writhe() == d.writhe() - 2
    assert out.signs[2] == -1


def test_welded_diagram_classical_moves_gated():
    w = parse_gauss("O1+,U2+,U1+,O2+", WELDED)
    # no classical reductions exist on the virtual trefoil, but toggles do
    assert locators(w, "R1") == []
    assert locators(w, "R2") == []
    assert locators(w, "X") == ["1", "2"]
    out = apply_move(w, "X", "1")
    assert out.mode == WELDED


def test_welded_moves_on_classical_diagram_find_nothing():
    d = parse_gauss(TREFOIL)
    for kind in ("V1", "V2", "V3", "MIXED", "OC"):
        assert locators(d, kind) == []


def test_program_parse_apply_round_trip():
    d = parse_gauss(FIG8)
    steps = parse_program("D13 1,2,3,4\nX 2")
    assert [s.text() for s in steps] == ["D13 1,2,3,4", "X 2"]
    out = apply_program(d, steps)
    # D13 toggles crossings 1 and 3, then X toggles 2
    assert out.signs[1] == -d.signs[1]
    assert out.signs[3] == -d.signs[3]
    assert out.signs[2] == -d.signs[2]
    assert out.signs[4] == d.signs[4]


def test_stale_program_step_reports_position():
    d = parse_gauss("O1+,U2+,O2+,U1+")
    steps = parse_program("R2 1,2\nX 1")
    with pytest.raises(StaleSite):
        apply_program(d, steps)


def test_site_and_step_are_frozen():
    s = Site("X", "1")
    with pytest.raises(Exception):
        s.locator = "2"
    st_ = Step("X", "1")
    with pytest.raises(Exception):
        st_.kind = "R1"


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_diagonal_toggle_involution_and_writhe_fuzzed(seed):
    rng = oracles.seeded(seed)
    d = parse_gauss(oracles.random_classical_code(rng, max_crossings=4))
    for kind in ("D13", "D24"):
        sites = find_sites(d, kind)
        if not sites:
            continue
        loc = rng.choice(sites).locator
        once = apply_move(d, kind, loc)
        assert once.writhe() - d.writhe() in (-4, 0, 4)
        again = apply_move(once, kind, loc)
        assert again.canonical_text() == d.canonical_text()


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_reductions_reduce_and_preserve_mode_fuzzed(seed):
    rng = oracles.seeded(seed)
    d = parse_gauss(oracles.random_welded_code(rng), WELDED)
    shrink = {"R1": 1, "R2": 2, "V1": 1, "V2": 2}
    for kind, drop in shrink.items():
        for site in find_sites(d, kind):
            out = apply_move(d, kind, site.locator)
            assert len(out.crossing_ids()) == len(d.crossing_ids()) - drop
            assert out.mode == WELDED
            assert len(out.components) == len(d.components)
