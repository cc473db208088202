"""Local rewrites of diagrams: Reidemeister moves, their virtual/welded
companions, and the crossing-toggle family (single toggles, diagonal
moves on quadrilaterals, band and polygon toggles).

Everything here is a sequence rewrite.  Sites are located by stable text
locators (crossing ids and ``tail>head`` arc descriptors), enumerated
deterministically, and every rewrite is re-validated by rebuilding the
diagram, so an illegal application can never produce a corrupt result.

Polygon sites (bigons, triangles, quadrilaterals, general n-gons) are
found by one shared cycle search: an n-gon is a closed chain of n arcs
through n distinct crossings which, at every corner, arrives and leaves
through the two different passes of that crossing.  Matches that are not
strict disk faces (e.g. with a sealed-off component nested inside) are
accepted on purpose: nothing crosses the chain, so the rewrite is still
sound.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagram import CLASSICAL, WELDED, Pass, build_diagram
from .errors import (
    InvariantBreach,
    KnotError,
    LexError,
    NonRealizable,
    ReplayFailure,
    StaleSite,
    UnknownKind,
    ValidationError,
)

# kinds usable in classical mode; welded mode adds the V family
CLASSICAL_KINDS = (
    "R1", "R1INS", "R2", "R2INS", "R3",
    "X", "D13", "D24", "DELTA", "GAMMA",
    "SHARP", "SHARPBAR", "PASS", "FOUR", "FOURINS",
)
WELDED_ONLY_KINDS = ("V1", "V1INS", "V2", "V2INS", "V3", "MIXED", "OC")
_NGON_RE = re.compile(r"^NGON(\d+)$")


@dataclass(frozen=True)
class Site:
    """One applicable move: a kind plus a stable text locator."""

    kind: str
    locator: str

    def text(self):
        return f"{self.kind} {self.locator}"


@dataclass(frozen=True)
class Step:
    """One line of a move program (same shape as a Site)."""

    kind: str
    locator: str

    def text(self):
        return f"{self.kind} {self.locator}"


# -- arc descriptors ----------------------------------------------------
#
# An arc is the gap after pass (ci, pi), written "tail>head" with sign
# omitted (so locators survive crossing toggles), e.g. "O3>U5".  The
# second visit of a virtual crossing is "V5.2".  The arc between the
# last pass and the basepoint is the wrap arc; insertions there default
# to the tail side, and a trailing "^" asks for the head side (right
# after the basepoint).  A crossing-free component's only arc is
# "loop<index>".


def _base_token(d, place):
    p = d.pass_at(place)
    if p.role != "V":
        return f"{p.role}{p.cid}"
    first = d.occurrences[p.cid][0]
    return f"V{p.cid}" if place == first else f"V{p.cid}.2"


def arc_text(d, arc):
    ci, pi = arc
    if pi is None:
        return f"loop{ci}"
    return f"{_base_token(d, (ci, pi))}>{_base_token(d, d.succ((ci, pi)))}"


_TOK_RE = re.compile(r"^([OUV])(\d+)(\.2)?$")


def _find_place(d, token):
    m = _TOK_RE.match(token)
    if not m:
        raise LexError(f"bad pass token {token!r}")
    role, cid, second = m.group(1), int(m.group(2)), bool(m.group(3))
    if second and role != "V":
        raise LexError(f"occurrence suffix is only for V passes: {token!r}")
    places = d.occurrences.get(cid)
    if not places:
        raise StaleSite(f"no crossing {cid} in this diagram")
    if role == "V":
        if d.kind_of(cid) != "virtual":
            raise StaleSite(f"crossing {cid} is not virtual")
        return places[1] if second else places[0]
    for pl in places:
        if d.pass_at(pl).role == role:
            return pl
    raise StaleSite(f"crossing {cid} has no {role} pass")


def parse_arc(d, text):
    """Resolve an arc descriptor; returns ((ci, pi), head_flag)."""
    head = text.endswith("^")
    if head:
        text = text[:-1]
    if text.startswith("loop"):
        try:
            ci = int(text[4:])
        except ValueError:
            raise LexError(f"bad arc {text!r}") from None
        if not 0 <= ci < len(d.components):
            raise StaleSite(f"no component {ci}")
        if d.components[ci]:
            raise StaleSite(f"component {ci} has crossings; name a tail>head arc")
        return (ci, None), head
    if ">" not in text:
        raise LexError(f"bad arc {text!r} (want tail>head or loopN)")
    tail_tok, head_tok = text.split(">", 1)
    tail = _find_place(d, tail_tok)
    want_head = _find_place(d, head_tok)
    if d.succ(tail) != want_head:
        raise StaleSite(f"{text!r} is not an arc here (passes not adjacent)")
    return tail, head


def all_arcs(d):
    out = []
    for ci, comp in enumerate(d.components):
        if not comp:
            out.append((ci, None))
        else:
            out.extend((ci, pi) for pi in range(len(comp)))
    return out


# -- list surgery -------------------------------------------------------


def _as_lists(d):
    return [list(c) for c in d.components]


def _insert(comps, arc, passes, head_flag=False):
    ci, pi = arc
    comp = comps[ci]
    if pi is None:
        comp.extend(passes)
        return
    at = (pi + 1) % len(comp) if head_flag else pi + 1
    comp[at:at] = passes


def _insert_two(comps, a, b, context):
    """Insert two pass blocks at two arcs, keeping indices consistent."""
    (arc_a, head_a, pa), (arc_b, head_b, pb) = a, b
    if arc_a == arc_b:
        raise StaleSite(f"{context}: the two arcs must be different")
    if arc_a[0] != arc_b[0] or arc_a[1] is None or arc_b[1] is None:
        _insert(comps, arc_a, pa, head_a)
        _insert(comps, arc_b, pb, head_b)
        return
    comp = comps[arc_a[0]]
    n = len(comp)
    ia = (arc_a[1] + 1) % n if head_a else arc_a[1] + 1
    ib = (arc_b[1] + 1) % n if head_b else arc_b[1] + 1
    if ia >= ib:
        comp[ia:ia] = pa
        comp[ib:ib] = pb
    else:
        comp[ib:ib] = pb
        comp[ia:ia] = pa


def _remove(comps, places):
    for ci, pi in sorted(places, reverse=True):
        del comps[ci][pi]


def _toggled(d, cids):
    """Components and signs after toggling the given classical crossings."""
    cids = set(cids)
    for cid in cids:
        if d.kind_of(cid) != "classical":
            raise StaleSite(f"crossing {cid} is not classical")
    comps = [
        [
            Pass(p.cid, ("U" if p.role == "O" else "O") if p.cid in cids else p.role)
            for p in comp
        ]
        for comp in d.components
    ]
    signs = {cid: -s if cid in cids else s for cid, s in d.signs.items()}
    return comps, signs


def _rebuild(d, comps, signs, *, expect_ok, context):
    triples = [
        [(p.role, p.cid, None if p.role == "V" else signs[p.cid]) for p in comp]
        for comp in comps
    ]
    try:
        return build_diagram(triples, d.mode)
    except NonRealizable:
        if expect_ok:
            raise InvariantBreach(f"{context}: rewrite unexpectedly broke planarity")
        raise StaleSite(f"{context}: no planar diagram at this site")
    except ValidationError as e:
        raise InvariantBreach(f"{context}: rewrite produced invalid data ({e})")


# -- polygon cycles -----------------------------------------------------


@dataclass(frozen=True)
class Polygon:
    """An n-gon: corner crossing ids and the directed sides joining them.

    ``sides[i]`` is ((ci, pi), forward) and runs from corners[i] to
    corners[(i+1) % n]; ``forward`` says whether the cycle walks the arc
    tail-to-head (with the strand) or head-to-tail (against it).
    """

    corners: tuple
    sides: tuple

    def attach(self, d, i, end):
        """Place where side i touches its start (end=0) or end (end=1) corner."""
        (arc, fwd) = self.sides[i]
        tail, head = arc, d.succ(arc)
        if fwd:
            return tail if end == 0 else head
        return head if end == 0 else tail

    def corner_places(self, d, i):
        """The two side-attachment places at corner i: (incoming, outgoing)."""
        n = len(self.corners)
        return (self.attach(d, (i - 1) % n, 1), self.attach(d, i, 0))


def _directed_sides_from(d, place):
    """The two cycle continuations leaving the given place."""
    out = []
    ci, pi = place
    out.append(((ci, pi), True))  # walk the outgoing arc forward
    pr = d.pred(place)
    out.append((pr, False))  # walk the incoming arc backward
    return out


def _side_far_place(d, side):
    arc, fwd = side
    return d.succ(arc) if fwd else arc


def _other_place(d, place):
    a, b = d.occurrences[d.pass_at(place).cid]
    return b if place == a else a


def polygons(d, n):
    """All n-gon cycles, deduplicated, in deterministic order."""
    found = {}
    arcs = [a for a in all_arcs(d) if a[1] is not None]
    for start_arc in arcs:
        for fwd in (True, False):
            first = (start_arc, fwd)
            start_place = start_arc if fwd else d.succ(start_arc)
            # walk: sides[k] ends at a corner; the next side leaves from
            # the other pass of that corner crossing
            def extend(sides, corner_cids):
                far = _side_far_place(d, sides[-1])
                cid = d.pass_at(far).cid
                if len(sides) == n:
                    # close up: the far end must return to the start place
                    # through the other pass of the final corner
                    if cid in corner_cids:
                        return
                    if _other_place(d, far) == start_place:
                        key = frozenset(arc for arc, _ in sides)
                        if key not in found:
                            found[key] = _canonical_polygon(d, sides, corner_cids + (cid,))
                    return
                if cid in corner_cids:
                    return
                nxt = _other_place(d, far)
                for side in _directed_sides_from(d, nxt):
                    extend(sides + [side], corner_cids + (cid,))

            extend([first], ())
    out = sorted(found.values(), key=lambda p: (p.corners, p.sides))
    return out


def _canonical_polygon(d, sides, after_cids):
    """Canonical orientation/rotation: corners[i] is where sides[i] starts."""
    n = len(sides)
    # corner at the start of sides[i] is the crossing after sides[i-1]
    corners = tuple(after_cids[(i - 1) % n] for i in range(n))
    best = None
    for r in range(n):
        rot_c = tuple(corners[(r + i) % n] for i in range(n))
        rot_s = tuple(sides[(r + i) % n] for i in range(n))
        if best is None or rot_c < best[0]:
            best = (rot_c, rot_s)
        # reflected: corners reversed starting at same point, sides reversed
        ref_c = tuple(corners[(r - i) % n] for i in range(n))
        ref_s = tuple(
            (sides[(r - 1 - i) % n][0], not sides[(r - 1 - i) % n][1])
            for i in range(n)
        )
        if ref_c < best[0]:
            best = (ref_c, ref_s)
    return Polygon(best[0], best[1])


def _match_polygon(d, n, corner_text, kinds_filter=None):
    """Find the first polygon whose cyclic corner order matches the locator."""
    want = _parse_ids(corner_text, n)
    cands = []
    for r in range(n):
        cands.append(tuple(want[(r + i) % n] for i in range(n)))
        cands.append(tuple(want[(r - i) % n] for i in range(n)))
    cset = set(cands)
    for poly in polygons(d, n):
        if poly.corners in cset:
            if kinds_filter is None or kinds_filter(poly):
                return poly
    raise StaleSite(f"no {n}-gon through crossings {corner_text} here")


def _parse_ids(text, n=None):
    try:
        ids = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise LexError(f"bad crossing list {text!r}") from None
    if n is not None and len(ids) != n:
        raise LexError(f"expected {n} crossing ids, got {len(ids)}")
    if len(set(ids)) != len(ids):
        raise LexError(f"crossing ids must be distinct in {text!r}")
    return ids


# -- polygon classification --------------------------------------------


def _corner_roles(d, poly):
    """For each corner: role of the pass on the incoming and outgoing side."""
    out = []
    for i in range(len(poly.corners)):
        pin, pout = poly.corner_places(d, i)
        out.append((d.pass_at(pin).role, d.pass_at(pout).role))
    return out


def _all_classical(d, poly):
    return all(d.kind_of(c) == "classical" for c in poly.corners)


def _bigon_class(d, poly):
    """'R2' (one side over throughout), 'GAMMA' (clasp), or None."""
    if not _all_classical(d, poly):
        return None
    (in0, out0), (in1, out1) = _corner_roles(d, poly)
    # side 0 touches corner0 at out0-slot? careful: corner_places gives
    # (incoming side place, outgoing side place) per corner.
    s0 = d.signs[poly.corners[0]]
    s1 = d.signs[poly.corners[1]]
    # roles of side0 at its two ends: at corner0 outgoing, corner1 incoming.
    # A uniform side (over at both ends) makes a poke bigon, whose partner
    # side is automatically all-under; a mixed side makes a clasp.
    side0 = (out0, in1)
    if side0[0] == side0[1]:
        return "R2" if s0 == -s1 else None
    return "GAMMA" if s0 == s1 else None


def _triangle_class(d, poly):
    """Classify a 3-gon: set of applicable kinds."""
    kinds = set()
    vcount = sum(1 for c in poly.corners if d.kind_of(c) == "virtual")
    if vcount == 3:
        kinds.add("V3")
        return kinds
    if vcount == 2:
        kinds.add("MIXED")
        return kinds
    if vcount == 1:
        return kinds
    # all classical: orderable (R3) or cyclic (DELTA)?
    # at each corner, one of the two touching sides carries the O pass
    # and dominates the other there.
    n = 3
    wins = {i: 0 for i in range(n)}
    for i in range(n):
        pin, pout = poly.corner_places(d, i)
        inc_side = (i - 1) % n
        out_side = i
        if d.pass_at(pin).role == "O":
            wins[inc_side] += 1
        else:
            wins[out_side] += 1
    counts = sorted(wins.values())
    kinds.add("DELTA" if counts == [1, 1, 1] else "R3")
    return kinds


def _oc_triangle(d, poly):
    """OC wants an all-over side with classical ends; the third corner is free."""
    for i in range(3):
        c_start = poly.corners[i]
        c_end = poly.corners[(i + 1) % 3]
        if d.kind_of(c_start) != "classical" or d.kind_of(c_end) != "classical":
            continue
        a = d.pass_at(poly.attach(d, i, 0))
        b = d.pass_at(poly.attach(d, i, 1))
        if a.role == "O" and b.role == "O":
            return True
    return False


def _quad_class(d, poly):
    """Band-over-band type of a 4-gon: 'SHARP', 'SHARPBAR', 'PASS', or None."""
    if not _all_classical(d, poly):
        return None
    # which side pair is over at every corner?  side indices mod 2 give
    # the two opposite pairs {0,2} and {1,3}.
    over_pair = None
    for i in range(4):
        pin, pout = poly.corner_places(d, i)
        inc_side = (i - 1) % 4
        out_side = i
        over_side = inc_side if d.pass_at(pin).role == "O" else out_side
        pair = over_side % 2
        if over_pair is None:
            over_pair = pair
        elif over_pair != pair:
            return None
    # orientation type per opposite pair: walking the cycle, opposite
    # sides traversed in the same arc direction are antiparallel strands
    def pair_type(p):
        f0 = poly.sides[p][1]
        f2 = poly.sides[p + 2][1]
        return "anti" if f0 == f2 else "par"

    t = {pair_type(0), pair_type(1)}
    if t == {"par"}:
        return "SHARP"
    if t == {"anti"}:
        return "PASS"
    return "SHARPBAR"


# -- rewrites on polygons ----------------------------------------------


def _swap_sides(d, poly, context):
    """Slide move: swap the two adjacent passes on each side of a polygon."""
    comps = _as_lists(d)
    for arc, _fwd in poly.sides:
        ci, pi = arc
        comp = comps[ci]
        qi = (pi + 1) % len(comp)
        comp[pi], comp[qi] = comp[qi], comp[pi]
    return _rebuild(d, comps, dict(d.signs), expect_ok=True, context=context)


def _toggle_corners(d, cids, context):
    comps, signs = _toggled(d, cids)
    return _rebuild(d, comps, signs, expect_ok=True, context=context)


# -- individual move kinds ---------------------------------------------


def _sites_r1(d):
    out = []
    for cid, (p1, p2) in d.occurrences.items():
        if d.kind_of(cid) != "classical":
            continue
        if d.succ(p1) == p2 or d.succ(p2) == p1:
            out.append(Site("R1", str(cid)))
    return sorted(out, key=lambda s: int(s.locator))


def _apply_r1(d, locator):
    (cid,) = _parse_ids(locator, 1)
    places = d.occurrences.get(cid)
    if not places or d.kind_of(cid) != "classical":
        raise StaleSite(f"no classical crossing {cid}")
    p1, p2 = places
    if d.succ(p1) != p2 and d.succ(p2) != p1:
        raise StaleSite(f"crossing {cid} is not a kink")
    comps = _as_lists(d)
    _remove(comps, [p1, p2])
    signs = {c: s for c, s in d.signs.items() if c != cid}
    return _rebuild(d, comps, signs, expect_ok=True, context="R1")


def _sites_r1ins(d):
    out = []
    for arc in all_arcs(d):
        at = arc_text(d, arc)
        for role in ("O", "U"):
            for sign in ("+", "-"):
                out.append(Site("R1INS", f"{at} {role} {sign}"))
    return out


def _apply_r1ins(d, locator):
    try:
        at, role, sign = locator.split()
    except ValueError:
        raise LexError(f"R1INS wants '<arc> <O|U> <+|->', got {locator!r}") from None
    if role not in ("O", "U") or sign not in ("+", "-"):
        raise LexError(f"R1INS wants '<arc> <O|U> <+|->', got {locator!r}")
    arc, head = parse_arc(d, at)
    cid = d.fresh_id()
    first = Pass(cid, role)
    second = Pass(cid, "U" if role == "O" else "O")
    comps = _as_lists(d)
    _insert(comps, arc, [first, second], head)
    signs = dict(d.signs)
    signs[cid] = 1 if sign == "+" else -1
    return _rebuild(d, comps, signs, expect_ok=True, context="R1INS")


def _sites_v1(d):
    out = []
    for cid, (p1, p2) in d.occurrences.items():
        if d.kind_of(cid) != "virtual":
            continue
        if d.succ(p1) == p2 or d.succ(p2) == p1:
            out.append(Site("V1", str(cid)))
    return sorted(out, key=lambda s: int(s.locator))


def _apply_v1(d, locator):
    (cid,) = _parse_ids(locator, 1)
    places = d.occurrences.get(cid)
    if not places or d.kind_of(cid) != "virtual":
        raise StaleSite(f"no virtual crossing {cid}")
    p1, p2 = places
    if d.succ(p1) != p2 and d.succ(p2) != p1:
        raise StaleSite(f"virtual crossing {cid} is not a kink")
    comps = _as_lists(d)
    _remove(comps, [p1, p2])
    return _rebuild(d, comps, dict(d.signs), expect_ok=True, context="V1")


def _sites_v1ins(d):
    return [Site("V1INS", arc_text(d, arc)) for arc in all_arcs(d)]


def _apply_v1ins(d, locator):
    arc, head = parse_arc(d, locator.strip())
    cid = d.fresh_id()
    comps = _as_lists(d)
    _insert(comps, arc, [Pass(cid, "V"), Pass(cid, "V")], head)
    return _rebuild(d, comps, dict(d.signs), expect_ok=True, context="V1INS")


def _bigon_sites(d, want):
    out = []
    seen = set()
    for poly in polygons(d, 2):
        if want == "V2":
            ok = all(d.kind_of(c) == "virtual" for c in poly.corners)
        else:
            ok = _bigon_class(d, poly) == want
        if not ok:
            continue
        key = frozenset(poly.corners)
        if key in seen:
            continue
        seen.add(key)
        out.append(Site(want, ",".join(str(c) for c in sorted(poly.corners))))
    return out


def _remove_pair(d, locator, *, virtual, context):
    a, b = _parse_ids(locator, 2)
    want_kind = "virtual" if virtual else "classical"
    for cid in (a, b):
        if cid not in d.occurrences or d.kind_of(cid) != want_kind:
            raise StaleSite(f"no {want_kind} crossing {cid}")
    match = None
    for poly in polygons(d, 2):
        if frozenset(poly.corners) != frozenset((a, b)):
            continue
        if virtual:
            match = poly
            break
        if _bigon_class(d, poly) == "R2":
            match = poly
            break
    if match is None:
        raise StaleSite(f"{context}: crossings {a},{b} do not bound a removable bigon")
    places = [pl for cid in (a, b) for pl in d.occurrences[cid]]
    comps = _as_lists(d)
    _remove(comps, places)
    signs = {c: s for c, s in d.signs.items() if c not in (a, b)}
    return _rebuild(d, comps, signs, expect_ok=True, context=context)


def _apply_r2(d, locator):
    return _remove_pair(d, locator, virtual=False, context="R2")


def _apply_v2(d, locator):
    return _remove_pair(d, locator, virtual=True, context="V2")


def _apply_gamma(d, locator):
    a, b = _parse_ids(locator, 2)
    for poly in polygons(d, 2):
        if frozenset(poly.corners) == frozenset((a, b)) and _bigon_class(d, poly) == "GAMMA":
            return _toggle_corners(d, (a, b), "GAMMA")
    raise StaleSite(f"crossings {a},{b} do not form a clasp")


def _pair_insert(d, locator, *, virtual, context):
    parts = locator.split()
    if virtual:
        if len(parts) != 3:
            raise LexError(f"{context} wants '<arcA> <arcB> <par|anti>'")
        ta, tb, flavor = parts
        over, lead = "A", "+"
    else:
        if len(parts) != 5:
            raise LexError(
                f"{context} wants '<arcA> <arcB> <A|B> <par|anti> <+|->'"
            )
        ta, tb, over, flavor, lead = parts
    if over not in ("A", "B") or flavor not in ("par", "anti") or lead not in ("+", "-"):
        raise LexError(f"bad {context} locator {locator!r}")
    if over == "B":
        ta, tb = tb, ta
    arc_a, head_a = parse_arc(d, ta)
    arc_b, head_b = parse_arc(d, tb)
    x, y = d.fresh_id(), d.fresh_id() + 1
    if virtual:
        over_passes = [Pass(x, "V"), Pass(y, "V")]
        under_passes = [Pass(x, "V"), Pass(y, "V")]
        signs = dict(d.signs)
    else:
        over_passes = [Pass(x, "O"), Pass(y, "O")]
        under_passes = [Pass(x, "U"), Pass(y, "U")]
        signs = dict(d.signs)
        s = 1 if lead == "+" else -1
        signs[x], signs[y] = s, -s
    if flavor == "anti":
        under_passes.reverse()
    comps = _as_lists(d)
    _insert_two(
        comps, (arc_a, head_a, over_passes), (arc_b, head_b, under_passes), context
    )
    return _rebuild(d, comps, signs, expect_ok=False, context=context)


def _apply_r2ins(d, locator):
    return _pair_insert(d, locator, virtual=False, context="R2INS")


def _apply_v2ins(d, locator):
    return _pair_insert(d, locator, virtual=True, context="V2INS")


def _sites_pair_ins(d, kind):
    out = []
    arcs = all_arcs(d)
    for a in arcs:
        for b in arcs:
            if a == b:
                continue
            ta, tb = arc_text(d, a), arc_text(d, b)
            if kind == "V2INS":
                out.append(Site(kind, f"{ta} {tb} par"))
                out.append(Site(kind, f"{ta} {tb} anti"))
            else:
                for flavor in ("par", "anti"):
                    for lead in ("+", "-"):
                        site = Site(kind, f"{ta} {tb} A {flavor} {lead}")
                        # classically, poking one arc over another only
                        # works when both border a common region; weed
                        # out the candidates that would leave the plane
                        try:
                            _apply_r2ins(d, site.locator)
                        except KnotError:
                            continue
                        out.append(site)
    return out


def _kink_corner(d, poly):
    """True when some corner crossing is a one-pass curl.

    The side-swap rewrite assumes the three strands leave the triangle
    at each corner; a curl re-enters immediately, so such triangles are
    not offered as slide sites.
    """
    for c in poly.corners:
        (c1, i1), (c2, i2) = d.occurrences[c]
        if c1 == c2:
            n = len(d.components[c1])
            if (i1 - i2) % n == 1 or (i2 - i1) % n == 1:
                return True
    return False


def _triangle_sites(d, want):
    out = []
    for poly in polygons(d, 3):
        if _kink_corner(d, poly):
            continue
        kinds = _triangle_class(d, poly)
        ok = want in kinds if want != "OC" else _oc_triangle(d, poly)
        if ok:
            out.append(Site(want, ",".join(str(c) for c in poly.corners)))
    return out


def _apply_triangle(d, locator, want):
    def fits(poly):
        if _kink_corner(d, poly):
            return False
        if want == "OC":
            return _oc_triangle(d, poly)
        return want in _triangle_class(d, poly)

    poly = _match_polygon(d, 3, locator, fits)
    return _swap_sides(d, poly, want)


def _window_matches(d, ids):
    """Does some twist window list its crossings exactly as ``ids``?"""
    for pl1, pl2, cids in _window_partners(d):
        if cids == ids or cids == ids[::-1]:
            return True
    return False


def _quad_sites(d, want):
    out = []
    for poly in polygons(d, 4):
        if want in ("D13", "D24"):
            if _all_classical(d, poly):
                out.append(Site(want, ",".join(str(c) for c in poly.corners)))
        elif _quad_class(d, poly) == want:
            out.append(Site(want, ",".join(str(c) for c in poly.corners)))
    if want in ("D13", "D24"):
        # twist windows count as quadrilaterals for the diagonal toggles
        for pl1, pl2, cids in _window_partners(d):
            out.append(Site(want, ",".join(str(c) for c in cids)))
        out.sort(key=lambda s: _parse_ids(s.locator, 4))
    return out


def _apply_quad(d, locator, want):
    ids = _parse_ids(locator, 4)

    def fits(poly):
        if want in ("D13", "D24"):
            return _all_classical(d, poly)
        return _quad_class(d, poly) == want

    if want in ("D13", "D24") and _window_matches(d, ids):
        pass  # window form; positions keep their written order
    else:
        _match_polygon(d, 4, locator, fits)
    if want == "D13":
        cids = (ids[0], ids[2])
    elif want == "D24":
        cids = (ids[1], ids[3])
    else:
        cids = ids
    return _toggle_corners(d, cids, want)


def _ngon_sites(d, n):
    out = []
    for poly in polygons(d, n):
        if _all_classical(d, poly):
            out.append(Site(f"NGON{n}", ",".join(str(c) for c in poly.corners)))
    return out


def _apply_ngon(d, n, locator):
    ids = _parse_ids(locator, n)
    _match_polygon(d, n, locator, lambda p: _all_classical(d, p))
    return _toggle_corners(d, ids, f"NGON{n}")


def _apply_x(d, locator):
    (cid,) = _parse_ids(locator, 1)
    if cid not in d.occurrences or d.kind_of(cid) != "classical":
        raise StaleSite(f"no classical crossing {cid}")
    return _toggle_corners(d, (cid,), "X")


def _sites_x(d):
    return [Site("X", str(cid)) for cid in d.classical_ids()]


# -- the four-twist block ----------------------------------------------


def _twist_runs(d):
    """All 4-long classical runs: four consecutive passes, distinct crossings."""
    runs = []
    for ci, comp in enumerate(d.components):
        m = len(comp)
        if m < 4:
            continue
        for start in range(m):
            places = [(ci, (start + k) % m) for k in range(4)]
            ps = [d.pass_at(pl) for pl in places]
            if any(p.role == "V" for p in ps):
                continue
            cids = [p.cid for p in ps]
            if len(set(cids)) != 4:
                continue
            roles = [p.role for p in ps]
            runs.append((tuple(places), tuple(cids), tuple(roles)))
    return runs


def _alternating(roles):
    return roles in (("O", "U", "O", "U"), ("U", "O", "U", "O"))


def _window_partners(d):
    """Pairs of complementary runs over the same four crossings.

    Two strands crossing each other four times in a row form a twist
    window; the four crossings sit in it like quadrilateral corners, so
    the diagonal toggles apply here as well as on true quadrilaterals.
    """
    seen = {}
    out = []
    for places, cids, roles in _twist_runs(d):
        for other_places, other_cids, other_roles in seen.get(frozenset(cids), []):
            if set(places) & set(other_places):
                continue
            comp = tuple("O" if r == "U" else "U" for r in other_roles)
            if cids == other_cids and roles == comp:
                out.append((other_places, places, other_cids))  # parallel
            elif cids == other_cids[::-1] and roles == comp[::-1]:
                out.append((other_places, places, other_cids))  # antiparallel
        seen.setdefault(frozenset(cids), []).append((places, cids, roles))
    dedup = {}
    for pl1, pl2, cids in out:
        key = frozenset(pl1) | frozenset(pl2)
        if key not in dedup:
            dedup[key] = (pl1, pl2, cids)
    return list(dedup.values())


def _four_partners(d):
    """Windows in proper-twist form with one shared sign (the 4-move shape)."""
    out = []
    for pl1, pl2, cids in _window_partners(d):
        if len({d.signs[c] for c in cids}) != 1:
            continue
        if not _alternating(tuple(d.pass_at(p).role for p in pl1)):
            continue
        out.append((pl1, pl2, cids))
    return out


def _sites_four(d):
    out = []
    for pl1, pl2, cids in _four_partners(d):
        out.append(Site("FOUR", ",".join(str(c) for c in cids)))
    return sorted(set(out), key=lambda s: s.locator)


def _apply_four(d, locator):
    ids = _parse_ids(locator, 4)
    for pl1, pl2, cids in _four_partners(d):
        if frozenset(cids) == frozenset(ids):
            comps = _as_lists(d)
            _remove(comps, list(pl1) + list(pl2))
            signs = {c: s for c, s in d.signs.items() if c not in ids}
            return _rebuild(d, comps, signs, expect_ok=True, context="FOUR")
    raise StaleSite(f"crossings {locator} do not form a four-twist block")


def _apply_fourins(d, locator):
    parts = locator.split()
    if len(parts) != 5:
        raise LexError("FOURINS wants '<arcA> <arcB> <par|anti> <+|-> <O|U>'")
    ta, tb, flavor, sign, first_role = parts
    if flavor not in ("par", "anti") or sign not in ("+", "-") or first_role not in ("O", "U"):
        raise LexError(f"bad FOURINS locator {locator!r}")
    arc_a, head_a = parse_arc(d, ta)
    arc_b, head_b = parse_arc(d, tb)
    base = d.fresh_id()
    cids = [base + k for k in range(4)]
    roles_a = [first_role if k % 2 == 0 else ("U" if first_role == "O" else "O") for k in range(4)]
    a_passes = [Pass(c, r) for c, r in zip(cids, roles_a)]
    b_roles = ["U" if r == "O" else "O" for r in roles_a]
    b_passes = [Pass(c, r) for c, r in zip(cids, b_roles)]
    if flavor == "anti":
        b_passes.reverse()
    signs = dict(d.signs)
    for c in cids:
        signs[c] = 1 if sign == "+" else -1
    comps = _as_lists(d)
    _insert_two(
        comps, (arc_a, head_a, a_passes), (arc_b, head_b, b_passes), "FOURINS"
    )
    return _rebuild(d, comps, signs, expect_ok=False, context="FOURINS")


def _sites_fourins(d):
    out = []
    arcs = all_arcs(d)
    for a in arcs:
        for b in arcs:
            if a == b:
                continue
            for flavor in ("par", "anti"):
                for sign in ("+", "-"):
                    out.append(
                        Site(
                            "FOURINS",
                            f"{arc_text(d, a)} {arc_text(d, b)} {flavor} {sign} O",
                        )
                    )
    return out


# -- public API ---------------------------------------------------------

_FAMILIES = {
    "R1": ("R1", "R1INS"),
    "R2": ("R2", "R2INS"),
    "V1": ("V1", "V1INS"),
    "V2": ("V2", "V2INS"),
    "FOUR": ("FOUR", "FOURINS"),
}


def _normalize_kind(d, kind, direction):
    m = _NGON_RE.match(kind)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise UnknownKind(f"NGON needs n >= 2, got {kind}")
        return kind
    if kind in _FAMILIES:
        kind = _FAMILIES[kind][0 if direction != "insert" else 1]
    all_kinds = CLASSICAL_KINDS + WELDED_ONLY_KINDS
    if kind not in all_kinds:
        raise UnknownKind(f"unknown move kind {kind!r}")
    return kind


def _welded_gated(d, kind):
    return kind in WELDED_ONLY_KINDS and d.mode != WELDED


def find_sites(d, kind, direction="reduce"):
    """Enumerate applicable sites of one kind, deterministically ordered.

    ``direction`` picks removal ('reduce', default) or insertion
    ('insert') for the R1/R2/V1/V2/FOUR families; other kinds are their
    own inverses and ignore it.  Welded-only kinds yield no sites on a
    classical diagram.
    """
    kind = _normalize_kind(d, kind, direction)
    if _welded_gated(d, kind):
        return []
    sites = _find_sites_raw(d, kind)
    seen = set()
    out = []
    for s in sites:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def _find_sites_raw(d, kind):
    m = _NGON_RE.match(kind)
    if m:
        return _ngon_sites(d, int(m.group(1)))
    if kind == "R1":
        return _sites_r1(d)
    if kind == "R1INS":
        return _sites_r1ins(d)
    if kind == "V1":
        return _sites_v1(d)
    if kind == "V1INS":
        return _sites_v1ins(d)
    if kind == "R2":
        return _bigon_sites(d, "R2")
    if kind == "V2":
        return _bigon_sites(d, "V2")
    if kind == "GAMMA":
        return _bigon_sites(d, "GAMMA")
    if kind in ("R2INS", "V2INS"):
        return _sites_pair_ins(d, kind)
    if kind in ("R3", "DELTA", "V3", "MIXED", "OC"):
        return _triangle_sites(d, kind)
    if kind in ("D13", "D24", "SHARP", "SHARPBAR", "PASS"):
        return _quad_sites(d, kind)
    if kind == "X":
        return _sites_x(d)
    if kind == "FOUR":
        return _sites_four(d)
    if kind == "FOURINS":
        return _sites_fourins(d)
    raise UnknownKind(kind)  # pragma: no cover


def apply_move(d, kind, locator=None):
    """Apply one move; returns the rewritten diagram (inputs untouched).

    ``kind`` may be a Site/Step (locator omitted) or a kind name plus a
    locator string.
    """
    if isinstance(kind, (Site, Step)):
        kind, locator = kind.kind, kind.locator
    if locator is None:
        raise ValidationError("apply_move needs a locator")
    kind = _normalize_kind(d, kind, "reduce")
    if _welded_gated(d, kind):
        raise ValidationError(f"{kind} needs a welded-mode diagram")
    m = _NGON_RE.match(kind)
    if m:
        return _apply_ngon(d, int(m.group(1)), locator)
    table = {
        "R1": _apply_r1,
        "R1INS": _apply_r1ins,
        "V1": _apply_v1,
        "V1INS": _apply_v1ins,
        "R2": _apply_r2,
        "R2INS": _apply_r2ins,
        "V2": _apply_v2,
        "V2INS": _apply_v2ins,
        "GAMMA": _apply_gamma,
        "X": _apply_x,
        "FOUR": _apply_four,
        "FOURINS": _apply_fourins,
    }
    if kind in table:
        return table[kind](d, locator)
    if kind in ("R3", "DELTA", "V3", "MIXED", "OC"):
        return _apply_triangle(d, locator, kind)
    if kind in ("D13", "D24", "SHARP", "SHARPBAR", "PASS"):
        return _apply_quad(d, locator, kind)
    raise UnknownKind(kind)  # pragma: no cover


# -- programs -----------------------------------------------------------


def parse_program(text):
    """Parse a move program: one '<KIND> <locator>' per line, # comments."""
    steps = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        kind = parts[0]
        locator = parts[1].strip() if len(parts) > 1 else ""
        steps.append(Step(kind, locator))
    return steps


def program_text(steps):
    return "\n".join(s.text() for s in steps)


def apply_program(d, steps):
    """Run a whole program; failures carry the 1-based step number."""
    if isinstance(steps, str):
        steps = parse_program(steps)
    cur = d
    for i, step in enumerate(steps, 1):
        try:
            cur = apply_move(cur, step)
        except (StaleSite, LexError, ValidationError, UnknownKind) as e:
            raise ReplayFailure(f"step {i} ({step.text()}): {e}") from e
    return cur
