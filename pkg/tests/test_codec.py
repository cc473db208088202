import os

import pytest
from hypothesis import given, settings, strategies as st

from knotctl import (
    WELDED,
    alexander,
    emit_gauss,
    emit_pd,
    fixture_path,
    load_table,
    parse_gauss,
    parse_pd,
)
from knotctl.errors import FixtureMissing, LexError, ValidationError

import oracles

TREFOIL = "O1+,U2+,O3+,U1+,O2+,U3+"


def test_pd_emit_frozen():
    d = parse_gauss(TREFOIL)
    assert emit_pd(d) == "X[4,2,5,1],X[2,6,3,5],X[6,4,1,3]"


def test_pd_round_trip_trefoil():
    d = parse_gauss(TREFOIL)
    back = parse_pd(emit_pd(d))
    assert back.canonical_text() == d.canonical_text()


def test_pd_round_trip_link():
    hopf = parse_gauss("O1+,U2+;U1+,O2+")
    back = parse_pd(emit_pd(hopf))
    assert back.canonical_text() == hopf.canonical_text()


def test_pd_round_trip_welded():
    d = parse_gauss("O1+,U2+,U1+,O2+", WELDED)
    back = parse_pd(emit_pd(d), WELDED)
    assert back.canonical_text() == d.canonical_text()


def test_pd_rejects_unknots_and_garbage():
    with pytest.raises(ValidationError):
        emit_pd(parse_gauss("()"))
    with pytest.raises(LexError):
        parse_pd("")
    with pytest.raises(LexError):
        parse_pd("hello")
    with pytest.raises(ValidationError):
        parse_pd("X[1,2,3,4]")  # labels must each appear twice


def test_table_contents_frozen():
    table = load_table()
    assert list(table) == ["3_1", "4_1", "5_1", "5_2", "6_1", "7_1", "8_1", "9_1"]
    crossings = {name: len(e.diagram().classical_ids()) for name, e in table.items()}
    assert crossings == {
        "3_1": 3, "4_1": 4, "5_1": 5, "5_2": 6,
        "6_1": 7, "7_1": 7, "8_1": 8, "9_1": 9,
    }
    assert {name: e.unknotting for name, e in table.items()} == {
        "3_1": 1, "4_1": 1, "5_1": 2, "5_2": 1,
        "6_1": 1, "7_1": 3, "8_1": 1, "9_1": 4,
    }


def test_table_polynomials_match_engine():
    # the stored Alexander column must agree with what the engine computes
    for name, entry in load_table().items():
        assert alexander(entry.diagram()) == entry.alexander, name


def test_fixture_path_override(tmp_path, monkeypatch):
    monkeypatch.setenv("KNOTCTL_FIXTURES", str(tmp_path))
    with pytest.raises(FixtureMissing):
        fixture_path("table.txt")
    (tmp_path / "table.txt").write_text("k | O1+,U1+ | 1:0 | u:0\n")
    table = load_table()
    assert list(table) == ["k"]
    assert table["k"].unknotting == 0
    monkeypatch.delenv("KNOTCTL_FIXTURES")
    assert os.path.exists(fixture_path("table.txt"))


def test_load_table_error_paths(tmp_path):
    bad = tmp_path / "t.txt"
    bad.write_text("name | O1+,U1+\n")
    with pytest.raises(ValidationError):
        load_table(str(bad))
    bad.write_text("# only a comment\n")
    with pytest.raises(ValidationError):
        load_table(str(bad))
    with pytest.raises(FixtureMissing):
        load_table(str(tmp_path / "absent.txt"))


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_pd_round_trip_fuzzed_welded(seed):
    rng = oracles.seeded(seed)
    d = parse_gauss(oracles.random_welded_code(rng), WELDED)
    back = parse_pd(emit_pd(d), WELDED)
    assert back.canonical_text() == d.canonical_text()


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_pd_round_trip_fuzzed_classical(seed):
    rng = oracles.seeded(seed)
    d = parse_gauss(oracles.random_classical_code(rng))
    back = parse_pd(emit_pd(d))
    assert back.canonical_text() == d.canonical_text()
    assert emit_gauss(back.canonical_form()) == d.canonical_text()
