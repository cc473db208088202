"""Text forms for diagrams: Gauss codes, PD codes, and the knot table.

Gauss codes
    Components are separated by ``;``, passes by ``,``.  A classical pass
    is ``O<id><sign>`` or ``U<id><sign>`` (e.g. ``O3+``); a virtual pass
    (welded mode only) is ``V<id>``.  A crossing-free component is
    written ``()``.  Pass 0 of each component is the one right after the
    basepoint.

PD codes
    Comma-separated entries ``X[a,b,c,d]`` (classical, slots
    counterclockwise starting at the incoming under-edge) and
    ``V[a,b,c,d]`` (virtual, strands a->c and b->d).  Edge labels must
    increase by one along each strand, wrapping within the strand.  The
    over-strand direction of an X entry is inferred by propagating
    in/out constraints between shared labels and, where that leaves a
    choice, from the numbering.  ``X+[...]``/``X-[...]`` pin the sign
    explicitly.  Crossing ids are the 1-based positions of the entries.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from .diagram import CLASSICAL, WELDED, LinkDiagram, build_diagram, planar
from .errors import FixtureMissing, LexError, NonRealizable, ValidationError
from .laurent import Laurent

_GAUSS_TOKEN = re.compile(r"^(?:([OU])(\d+)([+-])|V(\d+))$")


# -- Gauss codes --------------------------------------------------------


def parse_gauss(text, mode=CLASSICAL):
    """Parse a Gauss code into a validated LinkDiagram."""
    if not isinstance(text, str) or not text.strip():
        raise LexError("empty Gauss code")
    comps = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk == "()" or chunk == "":
            if chunk == "":
                raise LexError("empty component; write () for a crossing-free loop")
            comps.append([])
            continue
        tokens = []
        for raw in chunk.split(","):
            raw = raw.strip()
            m = _GAUSS_TOKEN.match(raw)
            if not m:
                raise LexError(f"bad Gauss token {raw!r}")
            if m.group(4) is not None:
                tokens.append(("V", int(m.group(4)), None))
            else:
                sign = 1 if m.group(3) == "+" else -1
                tokens.append((m.group(1), int(m.group(2)), sign))
        comps.append(tokens)
    return build_diagram(comps, mode)


def emit_gauss(d):
    return d.gauss_text()


def check_realizable(text_or_diagram, mode=CLASSICAL):
    """Would this signed Gauss data embed in the plane?

    Accepts a Gauss code string or an existing diagram.  Purely
    classical information: virtual crossings make the question moot and
    raise ValidationError.
    """
    if isinstance(text_or_diagram, LinkDiagram):
        d = text_or_diagram
    else:
        d = parse_gauss(text_or_diagram, WELDED)
    if any(d.kind_of(cid) == "virtual" for cid in d.occurrences):
        raise ValidationError("realizability is a question about classical data only")
    return planar(d)


# -- PD codes -----------------------------------------------------------

_PD_ENTRY = re.compile(r"([XV])([+-]?)\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


def parse_pd(text, mode=CLASSICAL):
    """Parse a PD code into a validated LinkDiagram."""
    if not isinstance(text, str) or not text.strip():
        raise LexError("empty PD code")
    entries = []
    for m in _PD_ENTRY.finditer(text):
        entries.append((m.group(1), m.group(2), tuple(int(m.group(i)) for i in (3, 4, 5, 6))))
    leftover = re.sub(r"[\s,]", "", _PD_ENTRY.sub("", text))
    if not entries or leftover:
        raise LexError("PD code must be entries X[a,b,c,d] / V[a,b,c,d]")
    # slot kinds: 'a' is always an incoming edge, 'c' outgoing; for X the
    # b/d pair has one unknown orientation bit per entry.
    occ = {}  # label -> [(entry index, slot)]
    for i, (_, _, (a, b, c, dd)) in enumerate(entries):
        for slot, lab in zip("abcd", (a, b, c, dd)):
            occ.setdefault(lab, []).append((i, slot))
    for lab, places in occ.items():
        if len(places) != 2:
            raise ValidationError(f"edge label {lab} appears {len(places)} times, need 2")

    # Orientation bit per X entry: True means slot b is the incoming
    # over-edge (a negative crossing).  V entries are fixed (b in, d out).
    # "Each label enters exactly one crossing" ties the bits of entries
    # sharing a label together with a parity; solve that with a parity
    # union-find, pin clusters touched by a fixed slot (a/c/V or an
    # explicit sign), and settle free clusters from the numbering.
    nx = len(entries)
    parent = list(range(nx))
    parity = [0] * nx  # parity to parent

    def find(i):
        if parent[i] == i:
            return i, 0
        r, p = find(parent[i])
        parent[i], parity[i] = r, parity[i] ^ p
        return r, parity[i]

    def union(i, j, p):
        ri, pi = find(i)
        rj, pj = find(j)
        if ri == rj:
            if pi ^ pj != p:
                raise ValidationError("PD edge orientations are inconsistent")
            return
        parent[ri] = rj
        parity[ri] = pi ^ pj ^ p

    pinned = {}  # root -> bit value at parity 0

    def pin(i, value):
        r, p = find(i)
        want = value ^ bool(p)
        if r in pinned and pinned[r] != want:
            raise ValidationError("PD edge orientations are inconsistent")
        pinned[r] = want

    for i, (kind, sgn, _) in enumerate(entries):
        if kind == "X" and sgn:
            pin(i, sgn == "-")
    for lab, ((i, si), (j, sj)) in occ.items():
        fi = si in "ac" or entries[i][0] == "V"
        fj = sj in "ac" or entries[j][0] == "V"
        in_i = si in ("a",) or (entries[i][0] == "V" and si == "b")
        in_j = sj in ("a",) or (entries[j][0] == "V" and sj == "b")
        if fi and fj:
            if in_i == in_j:
                raise ValidationError(f"edge {lab} is not oriented consistently")
        elif fi:
            # entry j's slot must be the opposite kind of slot i
            pin(j, (not in_i) if sj == "b" else in_i)
        elif fj:
            pin(i, (not in_j) if si == "b" else in_j)
        else:
            # kind(i, si) = not kind(j, sj); same-letter slots anticorrelate
            union(i, j, 1 if si == sj else 0)
    bit = {}
    for i, (kind, _, (a, b, c, dd)) in enumerate(entries):
        if kind != "X":
            continue
        r, p = find(i)
        if r in pinned:
            bit[i] = pinned[r] ^ bool(p)
    for i, (kind, _, (a, b, c, dd)) in enumerate(entries):
        if kind == "X" and i not in bit:
            # numbering fallback on one representative per free cluster
            if dd == b + 1:
                val = True
            elif b == dd + 1:
                val = False
            else:
                val = b > dd  # wrap: the larger label comes first
            pin(i, val)
            for j, (kj, _, _) in enumerate(entries):
                if kj == "X" and j not in bit:
                    rj, pj = find(j)
                    if rj in pinned:
                        bit[j] = pinned[rj] ^ bool(pj)

    def kind_in(i, slot, b_is_in):
        # is this slot an incoming edge, given the entry's bit?
        if slot == "a":
            return True
        if slot == "c":
            return False
        if entries[i][0] == "V":
            return slot == "b"
        return b_is_in if slot == "b" else not b_is_in

    # final consistency: every label once in, once out
    heads = {}  # label -> (entry, slot) where it is incoming
    tails = {}
    for lab, places in occ.items():
        for i, slot in places:
            if kind_in(i, slot, bit.get(i)):
                if lab in heads:
                    raise ValidationError(f"edge {lab} enters two crossings")
                heads[lab] = (i, slot)
            else:
                if lab in tails:
                    raise ValidationError(f"edge {lab} leaves two crossings")
                tails[lab] = (i, slot)
    for lab in occ:
        if lab not in heads or lab not in tails:
            raise ValidationError(f"edge {lab} is not oriented consistently")

    # walk strands: follow edge -> crossing -> outgoing edge
    def out_edge(i, slot):
        kind, _, (a, b, c, dd) = entries[i]
        if slot == "a":
            return c
        if kind == "V":
            return dd  # slot b
        return dd if slot == "b" else b

    comps = []
    used = set()
    for start in sorted(occ):
        if start in used:
            continue
        tokens = []
        lab = start
        while lab not in used:
            used.add(lab)
            i, slot = heads[lab]
            kind = entries[i][0]
            if kind == "V":
                tokens.append(("V", i + 1, None))
            elif slot == "a":
                sign = 1 if not bit[i] else -1
                tokens.append(("U", i + 1, sign))
            else:
                sign = 1 if not bit[i] else -1
                tokens.append(("O", i + 1, sign))
            lab = out_edge(i, slot)
        if lab != start:
            raise ValidationError("PD strands do not close up")
        comps.append(tokens)
    return build_diagram(comps, mode)


def emit_pd(d):
    """Write a diagram as a PD code (fails on crossing-free components)."""
    for comp in d.components:
        if not comp:
            raise ValidationError("PD form cannot encode a crossing-free component")
    if not d.components:
        raise ValidationError("PD form cannot encode the empty diagram")
    # label the arc leaving pass (ci, pi); the arc entering pass 0 gets
    # the lowest label of its component so parse_pd recovers basepoints
    label = {}
    n = 1
    for ci, comp in enumerate(d.components):
        for pi in [len(comp) - 1] + list(range(len(comp) - 1)):
            label[(ci, pi)] = n
            n += 1
    into = lambda place: label[d.pred(place)]
    outof = lambda place: label[place]
    parts = []
    order = {}
    for cid in d.crossing_ids():
        p1, p2 = d._ordered_places(cid)
        if d.kind_of(cid) == "virtual":
            entry = f"V[{into(p1)},{into(p2)},{outof(p1)},{outof(p2)}]"
        else:
            pu = p2  # _ordered_places puts the over pass first
            po = p1
            a, c = into(pu), outof(pu)
            if d.signs[cid] > 0:
                entry = f"X[{a},{outof(po)},{c},{into(po)}]"
            else:
                entry = f"X[{a},{into(po)},{c},{outof(po)}]"
        order[cid] = entry
    return ",".join(order[cid] for cid in d.crossing_ids())


# -- knot table fixture -------------------------------------------------


@dataclass(frozen=True)
class TableEntry:
    name: str
    gauss: str
    alexander: Laurent
    unknotting: int | None

    def diagram(self):
        return parse_gauss(self.gauss)


def fixture_path(name):
    """Resolve a fixture file, honoring the KNOTCTL_FIXTURES override."""
    override = os.environ.get("KNOTCTL_FIXTURES")
    if override:
        cand = os.path.join(override, name)
        if os.path.exists(cand):
            return cand
        raise FixtureMissing(f"{name} not found under KNOTCTL_FIXTURES={override}")
    here = os.path.join(os.path.dirname(__file__), "fixtures", name)
    if not os.path.exists(here):
        raise FixtureMissing(f"fixture {name} is missing from the installation")
    return here


def load_table(path=None):
    """Read the bundled knot table: name | gauss | alexander [| u:<n>].

    Returns an ordered dict name -> TableEntry.  Diagrams are parsed on
    demand via TableEntry.diagram().
    """
    if path is None:
        path = fixture_path("table.txt")
    if not os.path.exists(path):
        raise FixtureMissing(f"no table file at {path}")
    table = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cols = [c.strip() for c in line.split("|")]
            if len(cols) not in (3, 4):
                raise ValidationError(f"{path}:{lineno}: expected 3 or 4 columns")
            name, gauss, poly = cols[:3]
            unknotting = None
            if len(cols) == 4 and cols[3]:
                if not cols[3].startswith("u:"):
                    raise ValidationError(f"{path}:{lineno}: fourth column must be u:<n>")
                unknotting = int(cols[3][2:])
            table[name] = TableEntry(name, gauss, Laurent.parse(poly), unknotting)
    if not table:
        raise ValidationError(f"{path}: table is empty")
    return table
