import pytest
from hypothesis import given, settings, strategies as st

from knotctl import CLASSICAL, WELDED, check_realizable, parse_gauss
from knotctl.errors import DuplicatePass, LexError, NonRealizable, ValidationError

import oracles

TREFOIL = "O1+,U2+,O3+,U1+,O2+,U3+"
VIRTUAL_TREFOIL = "O1+,U2+,U1+,O2+"


def test_parse_and_emit_round_trip():
    d = parse_gauss(TREFOIL)
    assert d.gauss_text() == TREFOIL
    assert d.mode == CLASSICAL
    assert d.classical_ids() == [1, 2, 3]
    assert d.virtual_ids() == []
    assert d.writhe() == 3


def test_unknot_and_multi_component():
    d = parse_gauss("()")
    assert d.components == ((),)
    assert d.writhe() == 0
    hopf = parse_gauss("O1+,U2+;U1+,O2+")
    assert len(hopf.components) == 2
    assert hopf.gauss_text() == "O1+,U2+;U1+,O2+"


def test_canonical_relabels_by_first_visit():
    d = parse_gauss("O7-,U3+,O3+,U7-")
    assert d.canonical_text() == "O1-,U2+,O2+,U1-"
    # canonicalizing twice changes nothing
    c = d.canonical_form()
    assert c.canonical_text() == c.gauss_text()


def test_canonical_is_basepoint_sensitive():
    # same knot, rotated starting point: distinct canonical texts by design
    a = parse_gauss("O1+,U2+,O3+,U1+,O2+,U3+")
    b = parse_gauss("U3+,O1+,U2+,O3+,U1+,O2+")
    assert a.canonical_text() != b.canonical_text()


def test_occurrences_and_places():
    d = parse_gauss(TREFOIL)
    assert tuple(d.occurrences[1]) == ((0, 0), (0, 3))
    assert d.pass_at((0, 0)).role == "O"
    assert d.pass_at((0, 3)).cid == 1
    assert d.succ((0, 5)) == (0, 0)
    assert d.pred((0, 0)) == (0, 5)


def test_traverse_flags_first_visits():
    rec = parse_gauss(TREFOIL).traverse(0)
    flags = [fv for _, _, fv in rec]
    assert flags == [True, True, True, False, False, False]
    with pytest.raises(Exception):
        parse_gauss(TREFOIL).traverse(1)


def test_is_descending():
    assert parse_gauss("O1+,O2+,U2+,U1+").is_descending()
    assert not parse_gauss(TREFOIL).is_descending()
    assert parse_gauss("()").is_descending()


def test_parse_errors():
    with pytest.raises(LexError):
        parse_gauss("")
    with pytest.raises(LexError):
        parse_gauss("O1*,U1*")
    with pytest.raises(DuplicatePass):
        parse_gauss("O1+,U1+,O1+,U1+")
    with pytest.raises(DuplicatePass):
        parse_gauss("O1+,O1+")  # two overs, no under
    with pytest.raises(Exception):
        parse_gauss("O1+,U1-")  # conflicting signs


def test_classical_mode_rejects_nonplanar():
    with pytest.raises(NonRealizable):
        parse_gauss(VIRTUAL_TREFOIL)
    # the same word is fine as a welded diagram
    d = parse_gauss(VIRTUAL_TREFOIL, WELDED)
    assert d.mode == WELDED


def test_check_realizable_frozen_verdicts():
    assert check_realizable(TREFOIL)
    assert not check_realizable(VIRTUAL_TREFOIL)
    assert check_realizable("O1+,U1+")
    assert check_realizable("()")
    with pytest.raises(ValidationError):
        check_realizable("V1,O2+,V1,U2+")


def test_realizability_matches_face_count_oracle_small():
    # the full sweep over every 4-crossing code lives in the acceptance
    # suite; here a fast pass over everything smaller
    total = 0
    for n in range(1, 4):
        for code in oracles.small_codes(n):
            assert check_realizable(code) == oracles.brute_realizable(code), code
            total += 1
    # 1, 3, 15 chord diagrams on 1..3 chords, times 4^n role/sign choices
    assert total == 1 * 4 + 3 * 16 + 15 * 64


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_canonical_idempotent_on_fuzzed_codes(seed):
    rng = oracles.seeded(seed)
    d = parse_gauss(oracles.random_welded_code(rng), WELDED)
    c = d.canonical_form()
    assert c.canonical_text() == c.gauss_text()
    assert c.writhe() == d.writhe()
    assert len(c.classical_ids()) == len(d.classical_ids())


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_parse_emit_round_trip_fuzzed(seed):
    rng = oracles.seeded(seed)
    code = oracles.random_welded_code(rng)
    d = parse_gauss(code, WELDED)
    assert parse_gauss(d.gauss_text(), WELDED).gauss_text() == d.gauss_text()
