"""Loader for the bundled rewrite-rule fixture.

The fixture (``fixtures/rules.txt``) describes each move kind as a local
tangle rewrite: either a list of PD-style fragment alternatives or a
``polygon <n>`` shape, plus named side conditions that the fragment
language cannot express (sign agreements, dominance order around a
triangle, band orientation types).  The move engine does not run off
these patterns — they are an independent, declarative statement of the
same rules, used by the test suite to cross-check site enumeration.

Fragment grammar (one alternative per ``lhs``/``alt`` line):

    X+[a,b,c,d]   classical, positive: (under-in, over-out, under-out, over-in)
    X-[a,b,c,d]   classical, negative: (under-in, over-in, under-out, over-out)
    X?[a,b,c,d]   either sign; slots a/c are under-in/under-out, b/d are
                  the over pair in either direction
    V[a,b,c,d]    virtual: strands a->c and b->d, unordered

Labels ``L<k>`` are boundary legs (used exactly once); lowercase labels
are internal edges (exactly twice, once flowing out of an entry and once
flowing in).  ``rhs`` is either ``wire W[x,y] ...`` (x flows into y),
``toggle <i,j,...>`` (1-based entry or corner indices), or ``slide``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .codec import fixture_path
from .errors import BoundaryMismatch, MalformedRule
from .moves import _oc_triangle, _quad_class, _triangle_class, polygons

_ENTRY_RE = re.compile(r"([XV])([+?-]?)\[\s*([^\]]*?)\s*\]")
_LEG_RE = re.compile(r"^L\d+$")
_EDGE_RE = re.compile(r"^[a-z][a-z0-9]*$")

KNOWN_REQUIREMENTS = (
    "equal-signs",
    "opposite-signs",
    "uniform-signs",
    "all-classical",
    "orderable",
    "cyclic",
    "band-par-par",
    "band-anti-anti",
    "band-mixed",
    "slider-over",
    "welded-only",
)


@dataclass(frozen=True)
class RuleEntry:
    kind: str  # 'X' or 'V'
    sign: int  # +1, -1, or 0 for '?'
    slots: tuple  # four labels

    def flows(self):
        """Per-slot flow: 'i', 'o', or '?' (undetermined over slot)."""
        if self.kind == "V":
            return ("i", "i", "o", "o")
        if self.sign > 0:
            return ("i", "o", "o", "i")
        if self.sign < 0:
            return ("i", "i", "o", "o")
        return ("i", "?", "o", "?")


@dataclass(frozen=True)
class Rule:
    name: str  # human-readable slug, distinct from the kind tag
    kind: str
    polygon: int | None  # n for polygon-shape rules, else None
    alts: tuple  # tuple of alternatives, each a tuple of RuleEntry
    rhs: tuple  # raw rhs tokens
    requires: tuple
    note: str
    # whether the written form stands for all boundary orientations at
    # once (via alternatives, sign/flow wildcards, or a polygon shape)
    orientation_closure: bool = True


def _parse_entries(text, where):
    entries = []
    rest = text
    for m in _ENTRY_RE.finditer(text):
        kind, sgn, inner = m.group(1), m.group(2), m.group(3)
        slots = tuple(s.strip() for s in inner.split(","))
        if len(slots) != 4 or not all(slots):
            raise MalformedRule(f"{where}: entry needs 4 labels: {m.group(0)}")
        if kind == "V":
            if sgn:
                raise MalformedRule(f"{where}: V entries carry no sign")
            sign = 0
        else:
            if sgn == "+":
                sign = 1
            elif sgn == "-":
                sign = -1
            elif sgn == "?":
                sign = 0
            else:
                raise MalformedRule(f"{where}: X entries need a sign or ?")
        for s in slots:
            if not (_LEG_RE.match(s) or _EDGE_RE.match(s)):
                raise MalformedRule(f"{where}: bad label {s!r}")
        entries.append(RuleEntry(kind, sign, slots))
        rest = rest.replace(m.group(0), "", 1)
    if rest.replace(",", "").strip():
        raise MalformedRule(f"{where}: unparsed text {rest.strip()!r}")
    if not entries:
        raise MalformedRule(f"{where}: no entries")
    return tuple(entries)


def _check_alt(kind, entries, where):
    """Leg/edge accounting for one alternative; returns the leg set."""
    uses = {}
    for ei, e in enumerate(entries):
        for si, lab in enumerate(e.slots):
            uses.setdefault(lab, []).append(e.flows()[si])
    legs = set()
    for lab, flows in uses.items():
        if _LEG_RE.match(lab):
            if len(flows) != 1:
                raise BoundaryMismatch(f"{where}: leg {lab} used {len(flows)} times")
            legs.add(lab)
        else:
            if len(flows) != 2:
                raise MalformedRule(
                    f"{where}: internal edge {lab} used {len(flows)} times, need 2"
                )
            known = [f for f in flows if f != "?"]
            if len(known) == 2 and known[0] == known[1]:
                raise MalformedRule(f"{where}: edge {lab} flows {known[0]} twice")
    return legs


def _check_rhs(rule_kind, rhs, legs, n_entries, polygon, where):
    if not rhs:
        raise MalformedRule(f"{where}: missing rhs")
    head = rhs[0]
    if head == "slide":
        if len(rhs) != 1:
            raise MalformedRule(f"{where}: slide takes no arguments")
        return
    if head == "toggle":
        try:
            idx = [int(x) for x in " ".join(rhs[1:]).replace(",", " ").split()]
        except ValueError:
            raise MalformedRule(f"{where}: toggle wants indices") from None
        limit = polygon if polygon else n_entries
        if not idx or any(not 1 <= i <= limit for i in idx):
            raise MalformedRule(f"{where}: toggle indices out of range 1..{limit}")
        return
    if head == "wire":
        seen = set()
        for tok in rhs[1:]:
            m = re.match(r"^W\[\s*(L\d+)\s*,\s*(L\d+)\s*\]$", tok)
            if not m:
                raise MalformedRule(f"{where}: bad wire {tok!r}")
            for leg in m.group(1), m.group(2):
                if leg not in legs:
                    raise BoundaryMismatch(f"{where}: wire leg {leg} not in lhs")
                if leg in seen:
                    raise BoundaryMismatch(f"{where}: leg {leg} wired twice")
                seen.add(leg)
        if seen != legs:
            raise BoundaryMismatch(f"{where}: wires must cover every leg exactly once")
        return
    raise MalformedRule(f"{where}: unknown rhs form {head!r}")


def load_rules(path=None):
    """Parse and validate the rule fixture; returns {kind: Rule}."""
    if path is None:
        path = fixture_path("rules.txt")
    rules = {}
    cur = None  # [kind, polygon, alts, rhs, requires, note, name]
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            toks = line.split()
            if toks[0] == "rule":
                if cur is not None:
                    raise MalformedRule(f"{where}: previous rule not closed with 'end'")
                if len(toks) != 2:
                    raise MalformedRule(f"{where}: rule wants exactly one kind name")
                cur = [toks[1], None, [], None, [], "", None]
            elif cur is None:
                raise MalformedRule(f"{where}: statement outside a rule block")
            elif toks[0] in ("lhs", "alt"):
                body = line[len(toks[0]):].strip()
                if body.startswith("polygon"):
                    if toks[0] != "lhs" or cur[2]:
                        raise MalformedRule(f"{where}: polygon must be the only lhs")
                    try:
                        cur[1] = int(body.split()[1])
                    except (IndexError, ValueError):
                        raise MalformedRule(f"{where}: polygon wants a size") from None
                    if cur[1] < 2:
                        raise MalformedRule(f"{where}: polygon size must be >= 2")
                else:
                    if cur[1] is not None:
                        raise MalformedRule(f"{where}: cannot mix polygon and fragments")
                    cur[2].append(_parse_entries(body, where))
            elif toks[0] == "rhs":
                if cur[3] is not None:
                    raise MalformedRule(f"{where}: duplicate rhs")
                cur[3] = tuple(toks[1:])
            elif toks[0] == "require":
                for req in toks[1:]:
                    if req not in KNOWN_REQUIREMENTS:
                        raise MalformedRule(f"{where}: unknown requirement {req!r}")
                    cur[4].append(req)
            elif toks[0] == "note":
                cur[5] = (cur[5] + " " + line[4:].strip()).strip()
            elif toks[0] == "name":
                if len(toks) != 2:
                    raise MalformedRule(f"{where}: name wants one token")
                cur[6] = toks[1]
            elif toks[0] == "end":
                kind, polygon, alts, rhs, requires, note, name = cur
                if polygon is None and not alts:
                    raise MalformedRule(f"{where}: rule {kind} has no lhs")
                legssets = [_check_alt(kind, alt, where) for alt in alts]
                if legssets and len({frozenset(s) for s in legssets}) != 1:
                    raise BoundaryMismatch(
                        f"{where}: alternatives of {kind} disagree on legs"
                    )
                legs = legssets[0] if legssets else set()
                nent = len(alts[0]) if alts else 0
                _check_rhs(kind, rhs, legs, nent, polygon, where)
                if kind in rules:
                    raise MalformedRule(f"{where}: duplicate rule {kind}")
                # virtual entries and sign-wildcard entries already stand
                # for every orientation, as do polygon shapes and
                # multi-alternative rules
                closed = (
                    polygon is not None
                    or len(alts) > 1
                    or any(e.kind == "V" or e.sign == 0 for a in alts for e in a)
                )
                rules[kind] = Rule(
                    name or kind.lower(),
                    kind,
                    polygon,
                    tuple(alts),
                    rhs,
                    tuple(requires),
                    note,
                    closed,
                )
                cur = None
            else:
                raise MalformedRule(f"{where}: unknown statement {toks[0]!r}")
    if cur is not None:
        raise MalformedRule(f"{path}: unterminated rule {cur[0]}")
    if not rules:
        raise MalformedRule(f"{path}: no rules found")
    return rules


# -- side-condition predicates, shared with the test-side matcher -------


def _signs_of(d, cids):
    return [d.signs[c] for c in cids if c in d.signs]


def check_requirement(name, d, cids):
    """Evaluate one named side condition on a set of matched crossings."""
    cids = tuple(cids)
    if name == "equal-signs":
        s = _signs_of(d, cids)
        return len(set(s)) <= 1
    if name == "opposite-signs":
        s = _signs_of(d, cids)
        return len(s) == 2 and s[0] == -s[1]
    if name == "uniform-signs":
        s = _signs_of(d, cids)
        return len(set(s)) <= 1
    if name == "all-classical":
        return all(d.kind_of(c) == "classical" for c in cids)
    if name == "welded-only":
        return d.mode == "welded"
    if name in ("orderable", "cyclic"):
        want = "R3" if name == "orderable" else "DELTA"
        return any(
            want in _triangle_class(d, p)
            for p in polygons(d, 3)
            if frozenset(p.corners) == frozenset(cids)
        )
    if name == "slider-over":
        return any(
            _oc_triangle(d, p)
            for p in polygons(d, 3)
            if frozenset(p.corners) == frozenset(cids)
        )
    if name in ("band-par-par", "band-anti-anti", "band-mixed"):
        want = {"band-par-par": "SHARP", "band-anti-anti": "PASS", "band-mixed": "SHARPBAR"}[name]
        return any(
            _quad_class(d, p) == want
            for p in polygons(d, 4)
            if frozenset(p.corners) == frozenset(cids)
        )
    raise MalformedRule(f"unknown requirement {name!r}")
