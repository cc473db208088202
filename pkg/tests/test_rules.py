import pytest

from knotctl import load_rules
from knotctl.errors import MalformedRule

ALL_KINDS = [
    "R1", "R2", "R3", "DELTA", "V1", "V2", "V3", "MIXED", "OC",
    "X", "GAMMA", "D13", "D24", "SHARP", "SHARPBAR", "PASS", "FOUR",
]


def test_every_kind_present():
    rules = load_rules()
    assert sorted(rules) == sorted(ALL_KINDS)
    assert len(rules) == 17


def test_names_are_distinct_slugs():
    rules = load_rules()
    names = [r.name for r in rules.values()]
    assert len(set(names)) == len(names)
    assert rules["R1"].name == "kink-removal"
    assert rules["X"].kind == "X"


def test_orientation_closure_flag():
    # every shipped rule is written to cover all boundary orientations
    for kind, rule in load_rules().items():
        assert rule.orientation_closure, kind


def test_alternatives_share_boundary():
    # R1 covers chirality x sign with four written alternatives
    rules = load_rules()
    assert len(rules["R1"].alts) == 4
    assert len(rules["R2"].alts) == 4
    for rule in rules.values():
        # written patterns, or a polygon shape generated on demand
        assert rule.alts or rule.polygon == 4, rule.kind


def test_rules_are_immutable_data():
    rules = load_rules()
    with pytest.raises(Exception):
        rules["R1"].name = "other"


def test_malformed_rule_file_rejected(tmp_path):
    bad = tmp_path / "rules.txt"
    bad.write_text("rule BOGUS\n  lhs X+[a,b,c]\n  rhs wire W[a,b]\nend\n")
    with pytest.raises(MalformedRule):
        load_rules(str(bad))
    bad.write_text("rule R1\n  lhs V+[a,b,c,d]\n  rhs wire W[a,b]\nend\n")
    with pytest.raises(MalformedRule):
        load_rules(str(bad))
