"""Oriented link diagrams stored as cyclic sequences of crossing passes.

A diagram is, per component, the cyclic list of passes read along the
orientation starting at that component's basepoint.  A classical crossing
appears exactly twice, once over (``O``) and once under (``U``), and
carries one sign shared by both passes; a virtual crossing (``V``, welded
mode only) appears exactly twice and is unsigned.  The basepoint of a
component always sits immediately before the pass stored at index 0, so
rewrites never need to track it separately.

Classical planarity is decided from the sequences alone.  The sign of a
classical crossing forces the counterclockwise order of its four incident
arc ends, so signed Gauss data has exactly one candidate embedding; we
count the faces of that rotation system and require Euler characteristic
2 on every connected piece.  Welded diagrams carry no embedding and no
such check.

All operations are pure: diagrams are never mutated after construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadComponent,
    DuplicatePass,
    NonRealizable,
    SignMismatch,
    ValidationError,
)

CLASSICAL = "classical"
WELDED = "welded"
MODES = (CLASSICAL, WELDED)


@dataclass(frozen=True)
class Pass:
    """One passage of a strand through a crossing."""

    cid: int
    role: str  # 'O', 'U' or 'V'


@dataclass(frozen=True)
class Crossing:
    """Read-only view of one crossing of a diagram.

    ``over``/``under`` are (component, position) locations of the two
    passes for classical crossings; virtual crossings expose their two
    locations in scan order via ``places``.
    """

    id: int
    kind: str  # 'classical' | 'virtual'
    sign: int | None
    places: tuple  # ((comp, pos), (comp, pos)) in scan order

    @property
    def over(self):
        return self.places[0] if self.kind == "classical" else None


@dataclass(frozen=True)
class TraversalRecord:
    """Ordered passes met while walking one component from its basepoint."""

    component: int
    entries: tuple  # of (cid, role, first_visit)

    def __iter__(self):
        return iter(self.entries)


def _sign_char(s):
    return "+" if s > 0 else "-"


class LinkDiagram:
    """Immutable combinatorial link diagram.

    Use :func:`build_diagram` (or the codec parsers) to construct one;
    the constructor itself trusts its arguments.
    """

    __slots__ = ("components", "signs", "mode", "_occ", "_canon")

    def __init__(self, components, signs, mode):
        self.components = tuple(tuple(c) for c in components)
        self.signs = dict(signs)
        self.mode = mode
        self._occ = None
        self._canon = None

    # -- basic queries -------------------------------------------------

    @property
    def occurrences(self):
        """cid -> [(comp, pos), ...] in scan order (components, then position)."""
        if self._occ is None:
            occ = {}
            for ci, comp in enumerate(self.components):
                for pi, p in enumerate(comp):
                    occ.setdefault(p.cid, []).append((ci, pi))
            self._occ = occ
        return self._occ

    def crossing_ids(self):
        return sorted(self.occurrences)

    def classical_ids(self):
        return sorted(cid for cid in self.occurrences if cid in self.signs)

    def virtual_ids(self):
        return sorted(cid for cid in self.occurrences if cid not in self.signs)

    def kind_of(self, cid):
        return "classical" if cid in self.signs else "virtual"

    def n_classical(self):
        return len(self.signs)

    def pass_at(self, place):
        ci, pi = place
        return self.components[ci][pi]

    def crossings(self):
        return [
            Crossing(
                id=cid,
                kind=self.kind_of(cid),
                sign=self.signs.get(cid),
                places=self._ordered_places(cid),
            )
            for cid in self.crossing_ids()
        ]

    def _ordered_places(self, cid):
        a, b = self.occurrences[cid]
        if self.kind_of(cid) == "classical" and self.pass_at(a).role != "O":
            a, b = b, a
        return (a, b)

    def fresh_id(self):
        return max(self.occurrences, default=0) + 1

    # -- sequence neighbours -------------------------------------------

    def succ(self, place):
        ci, pi = place
        return (ci, (pi + 1) % len(self.components[ci]))

    def pred(self, place):
        ci, pi = place
        return (ci, (pi - 1) % len(self.components[ci]))

    # -- serialization --------------------------------------------------

    def token(self, place):
        p = self.pass_at(place)
        if p.role == "V":
            return f"V{p.cid}"
        return f"{p.role}{p.cid}{_sign_char(self.signs[p.cid])}"

    def gauss_text(self):
        parts = []
        for ci, comp in enumerate(self.components):
            if not comp:
                parts.append("()")
            else:
                parts.append(",".join(self.token((ci, pi)) for pi in range(len(comp))))
        return ";".join(parts)

    def __repr__(self):
        return f"<LinkDiagram {self.mode} {self.gauss_text()!r}>"

    # -- canonical form -------------------------------------------------

    def canonical_form(self):
        """Relabel crossings 1..n in first-visit order from the basepoints.

        Equality of based oriented diagrams is token-for-token equality
        of the canonical Gauss text (see :meth:`canonical_text`).
        """
        relabel = {}
        for ci, comp in enumerate(self.components):
            for p in comp:
                if p.cid not in relabel:
                    relabel[p.cid] = len(relabel) + 1
        comps = [
            [Pass(relabel[p.cid], p.role) for p in comp] for comp in self.components
        ]
        signs = {relabel[cid]: s for cid, s in self.signs.items()}
        return LinkDiagram(comps, signs, self.mode)

    def canonical_text(self):
        if self._canon is None:
            self._canon = self.canonical_form().gauss_text()
        return self._canon

    # -- invariant-flavored queries -------------------------------------

    def writhe(self):
        """Sum of classical crossing signs (virtual crossings contribute 0)."""
        return sum(self.signs.values())

    def first_places(self):
        """cid -> (comp, pos) where the crossing is met first in scan order."""
        return {cid: places[0] for cid, places in self.occurrences.items()}

    def traverse(self, component):
        """Walk ``component`` from its basepoint.

        ``first_visit`` flags are global: a pass is a first visit when no
        earlier component, nor an earlier position of this one, meets the
        same crossing.
        """
        if not 0 <= component < len(self.components):
            raise BadComponent(
                f"component {component} out of range 0..{len(self.components) - 1}"
            )
        firsts = self.first_places()
        entries = []
        for pi, p in enumerate(self.components[component]):
            entries.append((p.cid, p.role, firsts[p.cid] == (component, pi)))
        return TraversalRecord(component, tuple(entries))

    def is_descending(self):
        """True when every classical crossing is met over before under.

        For links the scan order runs through components by index, which
        makes this exactly: each component descends on its own crossings
        and earlier components pass over later ones.
        """
        for cid, places in self.occurrences.items():
            if cid not in self.signs:
                continue
            if self.pass_at(places[0]).role != "O":
                return False
        return True


# -- construction and validation ---------------------------------------


def build_diagram(components, mode=CLASSICAL):
    """Assemble and validate a diagram from per-component token lists.

    ``components`` is an iterable of per-component lists of
    ``(role, cid, sign)`` triples; virtual passes use role ``'V'`` and
    ``sign None``.  Raises DuplicatePass / SignMismatch / ValidationError
    for structural problems and NonRealizable when classical signed data
    has no planar diagram.
    """
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}")
    comps = []
    signs = {}
    seen = {}  # cid -> [roles]
    for tokens in components:
        comp = []
        for role, cid, sign in tokens:
            if role not in ("O", "U", "V"):
                raise ValidationError(f"bad role {role!r}")
            if not isinstance(cid, int) or cid <= 0:
                raise ValidationError(f"crossing ids must be positive ints, got {cid!r}")
            if role == "V":
                if sign is not None:
                    raise ValidationError(f"virtual crossing {cid} must not carry a sign")
                if mode != WELDED:
                    raise ValidationError(
                        f"virtual crossing {cid} not allowed in classical mode"
                    )
            else:
                if sign not in (1, -1):
                    raise SignMismatch(f"crossing {cid}: sign must be +1 or -1")
                if cid in signs and signs[cid] != sign:
                    raise SignMismatch(f"crossing {cid}: conflicting signs")
                signs.setdefault(cid, sign)
            seen.setdefault(cid, []).append(role)
            comp.append(Pass(cid, role))
        comps.append(comp)
    for cid, roles in seen.items():
        if len(roles) != 2:
            raise DuplicatePass(f"crossing {cid} appears {len(roles)} times, need 2")
        if "V" in roles:
            if roles != ["V", "V"]:
                raise DuplicatePass(f"crossing {cid} mixes virtual and classical passes")
        elif sorted(roles) != ["O", "U"]:
            raise DuplicatePass(f"crossing {cid} needs one over and one under pass")
    d = LinkDiagram(comps, signs, mode)
    if mode == CLASSICAL and not planar(d):
        raise NonRealizable("signed Gauss data admits no planar diagram")
    return d


def remake(d, components, signs):
    """Rebuild a diagram after a rewrite, re-running full validation.

    Used by the move engine; errors surface as the usual build errors and
    are translated there.
    """
    triples = [
        [(p.role, p.cid, None if p.role == "V" else signs[p.cid]) for p in comp]
        for comp in components
    ]
    return build_diagram(triples, d.mode)


# -- planarity of classical diagrams ------------------------------------


def _rotations(d):
    """Forced CCW rotation at each classical crossing.

    Positive crossing: (over-in, under-in, over-out, under-out);
    negative: (over-in, under-out, over-out, under-in).  Ends are
    ('i'|'o', (comp, pos)).
    """
    rot = {}
    for cid, places in d.occurrences.items():
        a, b = places
        if d.pass_at(a).role == "O":
            po, pu = a, b
        else:
            po, pu = b, a
        if d.signs[cid] > 0:
            rot[cid] = (("i", po), ("i", pu), ("o", po), ("o", pu))
        else:
            rot[cid] = (("i", po), ("o", pu), ("o", po), ("i", pu))
    return rot


def _mate(d, end):
    kind, (ci, pi) = end
    if kind == "o":
        return ("i", d.succ((ci, pi)))
    return ("o", d.pred((ci, pi)))


def planar(d):
    """Face-count check of the sign-forced rotation system.

    Every connected piece of the 4-valent graph must satisfy
    V - E + F = 2.  Components without crossings are trivially planar and
    ignored.  Only meaningful for classical diagrams.
    """
    rot = _rotations(d)
    # connected pieces over components
    parent = list(range(len(d.components)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for places in d.occurrences.values():
        a, b = find(places[0][0]), find(places[1][0])
        parent[a] = b
    # trace faces
    unvisited = set()
    for ci, comp in enumerate(d.components):
        for pi in range(len(comp)):
            unvisited.add(("i", (ci, pi)))
            unvisited.add(("o", (ci, pi)))
    faces_of = {}  # piece root -> face count
    while unvisited:
        start = unvisited.pop()
        piece = find(start[1][0])
        faces_of[piece] = faces_of.get(piece, 0) + 1
        end = start
        while True:
            cid = d.pass_at(end[1]).cid
            r = rot[cid]
            nxt = _mate(d, r[(r.index(end) + 1) % 4])
            if nxt == start:
                break
            unvisited.remove(nxt)
            end = nxt
    # Euler check per piece
    verts = {}
    edges = {}
    for cid, places in d.occurrences.items():
        verts[find(places[0][0])] = verts.get(find(places[0][0]), 0) + 1
    for ci, comp in enumerate(d.components):
        if comp:
            edges[find(ci)] = edges.get(find(ci), 0) + len(comp)
    for piece, f in faces_of.items():
        if verts.get(piece, 0) - edges.get(piece, 0) + f != 2:
            return False
    return True
