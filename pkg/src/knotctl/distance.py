"""Upper bounds on move distances, carried by replayable witnesses.

A distance between two knots counts the priced moves (crossing changes,
diagonal toggles, band moves, ...) needed to turn one into the other,
with ordinary Reidemeister moves free.  True distances minimize over
all diagrams, which no bounded search can certify, so everything here
is an upper bound backed by an explicit witness program, together with
whatever lower-bound evidence comes cheap: invariants that differ give
a lower bound of one, and exact crossing-change numbers from the
bundled table transfer to the other kinds through the witness
conversions (one diagonal toggle is at most two crossing changes, so a
crossing-change lower bound u forces at least ceil(u/2) diagonals).

The search is breadth-first in the number of priced moves.  Between
priced moves it explores a bounded closure under free moves: crossing
removals first, then triangle slides, then a few insertions, all
capped so runs stay at desk scale and deterministic.  Missing a free
path can only weaken a bound, never falsify one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .codec import load_table, parse_gauss
from .diagram import WELDED
from .errors import (
    AmbiguousTarget,
    BudgetExhausted,
    InvariantBreach,
    MultiComponent,
    UnknownKind,
    ValidationError,
)
from .invariants import alexander, fingerprint
from .moves import Step, apply_move, apply_program, find_sites
from .realize import convert_d_to_x, convert_to_d, count_d
from .unknot import _shifted, descending_change_set, is_untangled, simplify, unknot

# which site kinds count as one priced move of each family
KIND_SITES = {
    "D": ("D13", "D24"),
    "X": ("X",),
    "DELTA": ("DELTA",),
    "GAMMA": ("GAMMA",),
    "SHARP": ("SHARP",),
    "SHARPBAR": ("SHARPBAR",),
    "PASS": ("PASS",),
    "FOUR": ("FOUR",),
}

_FREE_CLASSICAL = ("R1", "R2", "R3")
_FREE_WELDED = ("R1", "R2", "R3", "V1", "V2", "V3", "MIXED", "OC")

# search knobs; all deterministic prefixes, so raising them never drops
# a previously found witness
INFLATION = 4  # extra crossings allowed over the starting diagram
CLOSURE_CAP = 24  # free-move states explored around one search node
INSERTS_PER_NODE = 2  # insertion sites tried per closure node
CLASS_CAP = 8  # nodes kept per invariant class per layer
LAYER_CAP = 256  # children generated per layer

_NGON_RE = re.compile(r"NGON(\d+)$")


def _site_kinds(kind):
    if kind in KIND_SITES:
        return KIND_SITES[kind]
    if _NGON_RE.match(kind):
        return (kind,)
    if kind in ("D13", "D24"):
        return (kind,)
    raise UnknownKind(f"no priced move family named {kind!r}")


def priced_count(steps, kind):
    """How many steps of a program are priced moves of the given family."""
    wanted = set(_site_kinds(kind))
    return sum(1 for s in steps if s.kind in wanted)


class _Budget:
    def __init__(self, n):
        if n <= 0:
            raise ValidationError("search budget must be positive")
        self.left = n

    def spend(self, k=1):
        self.left -= k
        if self.left < 0:
            raise BudgetExhausted("distance search budget ran out")


def _reduce(d, budget):
    """Simplify within the remaining budget, charging what it used."""
    sd, steps, used = simplify(d, budget=max(budget.left, 1))
    budget.spend(used)
    return sd, tuple(steps)


def _free_kinds(mode):
    return _FREE_WELDED if mode == WELDED else _FREE_CLASSICAL


def _closure(d, steps, budget, cap):
    """Diagrams reachable by cost-0 moves, bounded and in fixed order.

    Removals are tried before slides, slides before insertions, and the
    whole walk stops at CLOSURE_CAP states, so the closure is a
    deterministic sample rather than the full equivalence class.
    """
    out = [(d, steps)]
    seen = {d.canonical_text()}
    i = 0
    while i < len(out) and len(out) < CLOSURE_CAP:
        cur, hist = out[i]
        i += 1
        sites = []
        for k in _free_kinds(cur.mode):
            sites.extend(find_sites(cur, k))
        if len(cur.classical_ids()) + 1 <= cap:
            # curls only: poke insertions pay a planarity probe per
            # candidate pair, too dear at every search node
            grown = find_sites(cur, "R1", direction="insert")
            sites.extend(grown[:INSERTS_PER_NODE])
        for s in sites:
            if len(out) >= CLOSURE_CAP:
                break
            budget.spend()
            nxt = apply_move(cur, s)
            key = nxt.canonical_text()
            if key not in seen:
                seen.add(key)
                out.append((nxt, hist + (Step(s.kind, s.locator),)))
    return out


def _class_key(sd):
    # invariant class used for pruning: cheap and move-invariant
    try:
        return alexander(sd).text() + "/" + str(len(sd.classical_ids()))
    except MultiComponent:
        return sd.canonical_text()


def _search(start, kind, check, budget, max_cost, notes):
    """Layered search: layer n holds states n priced moves from start.

    ``check(simplified_diagram)`` decides hits.  Returns
    ``(cost, witness)`` or None once every layer up to max_cost has
    been explored without a hit.
    """
    site_kinds = _site_kinds(kind)
    cap = len(start.classical_ids()) + INFLATION
    root_sd, root_steps = _reduce(start, budget)
    if check(root_sd):
        return 0, root_steps
    frontier = [(start, ())]
    visited = {start.canonical_text()}
    for cost in range(1, max_cost + 1):
        children = []
        truncated = False
        for d, steps in frontier:
            for cd, csteps in _closure(d, steps, budget, cap):
                for sk in site_kinds:
                    for site in find_sites(cd, sk):
                        if len(children) >= LAYER_CAP:
                            truncated = True
                            break
                        budget.spend()
                        child = apply_move(cd, site)
                        key = child.canonical_text()
                        if key in visited:
                            continue
                        visited.add(key)
                        children.append(
                            (child, csteps + (Step(site.kind, site.locator),))
                        )
        if truncated:
            notes.append(f"layer {cost} truncated at {LAYER_CAP} states")
        hits = []
        nxt = []
        classes = {}
        for child, steps in children:
            sd, ssteps = _reduce(child, budget)
            if check(sd):
                hits.append(steps + ssteps)
                continue
            ck = _class_key(sd)
            n = classes.get(ck, 0)
            if n < CLASS_CAP:
                classes[ck] = n + 1
                nxt.append((child, steps))
        if hits:
            best = min(hits, key=lambda w: (len(w), [s.text() for s in w]))
            return cost, best
        frontier = nxt
        if not frontier:
            break
    return None


# -- reported bounds ----------------------------------------------------


@dataclass(frozen=True)
class Bound:
    """One upper bound with its witness program.

    ``witness`` replays from the source diagram (shifted by ``shifts``
    if a basepoint sweep chose a rotation); its endpoint is the target.
    ``lower`` is the best known lower bound, 0 when there is none.
    """

    kind: str
    bound: int
    witness: tuple
    lower: int = 0
    flagged: bool = False
    note: str = ""
    shifts: tuple = ()

    def __iter__(self):
        # allows  n, witness = unknotting_bound(...)
        yield self.bound
        yield self.witness

    def as_dict(self):
        return {
            "kind": self.kind,
            "bound": self.bound,
            "lower": self.lower,
            "flagged": self.flagged,
            "note": self.note,
            "shifts": list(self.shifts),
            "witness": [s.text() for s in self.witness],
        }

    def text(self):
        head = f"ub{self.kind} {self.bound}"
        if self.lower:
            head += f"  lower {self.lower}"
        head += f"  witness {len(self.witness)} steps"
        if self.flagged:
            head += "  [budget exhausted: fallback bound]"
        if self.note:
            head += f"  ({self.note})"
        return head


_UNKNOT_TEXT = "()"


def _unknot_reference(mode):
    return parse_gauss(_UNKNOT_TEXT, mode=mode)


def _knot_only(d):
    if len(d.components) != 1:
        raise MultiComponent("distance bounds are computed for knots only")


def _verified(source, shifts, witness, kind, bound):
    """Replay the witness and recount its priced moves before reporting."""
    base = _shifted(source, shifts) if any(shifts) else source
    apply_program(base, list(witness))
    if priced_count(witness, kind) != bound:
        raise InvariantBreach("witness move count disagrees with the bound")


def _rotations(d):
    n = len(d.components[0])
    return range(max(n, 1))


def unknotting_bound(d, kind="D", budget=100000, sweep=False):
    """Smallest number of priced moves found that untangles the knot.

    Runs the descending algorithm for a fallback bound (families D and
    X), then searches below it layer by layer.  Returns a Bound, which
    also unpacks as ``(n, witness)``.  If the budget dies mid-search
    the fallback is returned flagged; without a fallback the error
    propagates.
    """
    _knot_only(d)
    kind = kind.upper()
    _site_kinds(kind)  # validate early
    if sweep:
        return _swept(unknotting_bound, d, None, kind, budget)
    budget_box = _Budget(budget)

    fallback = None
    if kind in ("D", "X"):
        rep = unknot(d, budget=budget_box.left, style=kind)
        budget_box.spend(rep.moves_used)
        if rep.trivial:
            n = rep.d_count if kind == "D" else rep.change_count
            fallback = (n, tuple(rep.program))

    lower = 0
    root_fp = None
    if len(d.classical_ids()) > 0:
        root_fp = fingerprint(d)
        if root_fp != fingerprint(_unknot_reference(d.mode)):
            lower = 1

    if fallback is not None and fallback[0] <= lower:
        b = Bound(kind, fallback[0], fallback[1], lower=lower,
                  note="descending bound meets the lower bound")
        _verified(d, b.shifts, b.witness, kind, b.bound)
        return b

    if fallback is not None:
        max_cost = fallback[0] - 1
    else:
        sd, _ = _reduce(d, budget_box)
        max_cost = max(len(descending_change_set(sd)), 1)

    notes = []

    def check(sd):
        return is_untangled(sd)

    try:
        found = _search(d, kind, check, budget_box, max_cost, notes)
    except BudgetExhausted:
        if fallback is None:
            raise
        b = Bound(kind, fallback[0], fallback[1], lower=lower, flagged=True,
                  note="search budget ran out; descending bound reported")
        _verified(d, b.shifts, b.witness, kind, b.bound)
        return b

    if found is not None:
        cost, witness = found
        b = Bound(kind, cost, witness, lower=lower, note="; ".join(notes))
    elif fallback is not None:
        b = Bound(kind, fallback[0], fallback[1], lower=lower,
                  note="search found nothing shorter")
    else:
        raise BudgetExhausted(
            f"no {kind} untangling found within {max_cost} moves")
    _verified(d, b.shifts, b.witness, kind, b.bound)
    return b


def distance_bound(d, target, kind="D", budget=100000, sweep=False):
    """Upper bound on the priced-move distance between two knots.

    The endpoint must simplify to the same canonical code as the
    simplified target.  States whose fingerprint matches the target
    without the codes agreeing are collected; if the search ends with
    only such near-hits, AmbiguousTarget is raised with the evidence
    rather than accepting them.
    """
    _knot_only(d)
    _knot_only(target)
    if d.mode != target.mode:
        raise ValidationError("source and target must be in the same mode")
    kind = kind.upper()
    _site_kinds(kind)
    if sweep:
        return _swept(distance_bound, d, target, kind, budget)
    budget_box = _Budget(budget)

    tsd, _ = _reduce(target, budget_box)
    target_canon = tsd.canonical_text()
    target_alex = _class_key(tsd)
    target_fp = fingerprint(target, crossings=len(tsd.classical_ids()))
    ambiguous = []

    def check(sd):
        if sd.canonical_text() == target_canon:
            return True
        if _class_key(sd) == target_alex:
            fp = fingerprint(sd, crossings=len(sd.classical_ids()))
            if fp == target_fp:
                ambiguous.append(sd.canonical_text())
        return False

    sd0, _ = _reduce(d, budget_box)
    max_cost = len(descending_change_set(sd0)) + len(descending_change_set(tsd))
    max_cost = max(max_cost, 1)

    notes = []
    found = _search(d, kind, check, budget_box, max_cost, notes)
    if found is None:
        if ambiguous:
            raise AmbiguousTarget(
                "endpoint fingerprints match the target but the codes "
                "do not; refusing to report a bound",
                evidence=tuple(dict.fromkeys(ambiguous)),
            )
        raise BudgetExhausted(
            f"no {kind} path to the target within {max_cost} moves")
    cost, witness = found
    note = "; ".join(notes)
    if ambiguous:
        extra = f"{len(set(ambiguous))} fingerprint-only matches ignored"
        note = f"{note}; {extra}" if note else extra
    b = Bound(kind, cost, witness, note=note)
    _verified(d, b.shifts, b.witness, kind, b.bound)
    return b


def _swept(fn, d, target, kind, budget):
    """Try every basepoint rotation of the source, keep the best bound.

    The budget is split evenly across rotations so a sweep costs what
    the plain call would.
    """
    rots = list(_rotations(d))
    per = max(budget // len(rots), 1)
    best = None
    last_err = None
    for k in rots:
        shifted = _shifted(d, (k,)) if k else d
        try:
            if target is None:
                b = fn(shifted, kind, budget=per, sweep=False)
            else:
                b = fn(shifted, target, kind, budget=per, sweep=False)
        except (BudgetExhausted, AmbiguousTarget) as e:
            last_err = e
            continue
        b = replace(b, shifts=(k,))
        key = (b.bound, len(b.witness), [s.text() for s in b.witness])
        if best is None or key < best[0]:
            best = (key, b)
    if best is None:
        raise last_err if last_err is not None else BudgetExhausted(
            "sweep found no bound")
    return best[1]


# -- relation report ----------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """One witness conversion between move families, replay-checked."""

    rule: str
    source_kind: str
    derived_kind: str
    length: int
    verdict: bool

    def as_dict(self):
        return {
            "rule": self.rule,
            "from": self.source_kind,
            "to": self.derived_kind,
            "length": self.length,
            "verdict": self.verdict,
        }

    def text(self):
        flag = "ok" if self.verdict else "FAILED"
        return f"{self.rule}: length {self.length}, replay {flag}"


@dataclass(frozen=True)
class DistanceReport:
    source: str
    target: str
    bounds: dict
    relations: tuple = ()
    evidence: tuple = ()
    notes: tuple = ()

    def as_dict(self):
        return {
            "source": self.source,
            "target": self.target,
            "bounds": {k: b.as_dict() for k, b in self.bounds.items()},
            "relations": [r.as_dict() for r in self.relations],
            "evidence": list(self.evidence),
            "notes": list(self.notes),
        }

    def text(self):
        lines = [f"source  {self.source}", f"target  {self.target}"]
        for k in sorted(self.bounds):
            lines.append(self.bounds[k].text())
        for r in self.relations:
            lines.append("relation " + r.text())
        for e in self.evidence:
            lines.append("evidence " + e)
        for n in self.notes:
            lines.append("note " + n)
        return "\n".join(lines)


def _resolve(x):
    if isinstance(x, str):
        entry = load_table().get(x)
        if entry is None:
            raise ValidationError(f"no table knot named {x!r}")
        return entry.diagram(), x
    return x, None


def _replay_base(src, bound):
    return _shifted(src, bound.shifts) if any(bound.shifts) else src


def _ends_match(base, original, converted):
    a = apply_program(base, list(original)).canonical_text()
    b = apply_program(base, list(converted)).canonical_text()
    return a == b


def relation_report(source, target=None, kinds=("D", "X"), budget=100000,
                    sweep=False):
    """Bounds for several move families plus every derivable conversion.

    Any family's witness converts to a diagonal witness (each crossing
    change costs one diagonal toggle via a lasso, band and polygon
    moves expand through their macros), and a diagonal witness converts
    to a crossing-change witness at two changes per toggle.  The
    conversions are replayed, reported, and used to tighten the
    bounds, which is what enforces ubD <= ubX <= 2*ubD on the way out.

    ``source``/``target`` take diagrams or table names; a None target
    means the unknot.  Table names also bring in the table's exact
    crossing-change unknotting number as labeled lower-bound evidence.
    """
    src, source_name = _resolve(source)
    if target is None or target == "unknot":
        tgt, target_name = None, None
    else:
        tgt, target_name = _resolve(target)
    notes = []
    bounds = {}
    for k in kinds:
        k = k.upper()
        try:
            if tgt is None:
                bounds[k] = unknotting_bound(src, k, budget=budget, sweep=sweep)
            else:
                bounds[k] = distance_bound(src, tgt, k, budget=budget,
                                           sweep=sweep)
        except (BudgetExhausted, AmbiguousTarget) as e:
            notes.append(f"{k}: {type(e).__name__}: {e}")

    relations = []

    def adopt(kind, length, witness, shifts, origin):
        cur = bounds.get(kind)
        if cur is None or length < cur.bound:
            lower = cur.lower if cur is not None else 0
            bounds[kind] = Bound(kind, length, tuple(witness), lower=lower,
                                 note=f"derived from the {origin} witness",
                                 shifts=shifts)

    for k in list(bounds):
        if k == "D":
            continue
        b = bounds[k]
        base = _replay_base(src, b)
        conv = tuple(convert_to_d(base, list(b.witness)))
        n = count_d(conv)
        ok = _ends_match(base, b.witness, conv)
        relations.append(Relation(f"{k}->D", k, "D", n, ok))
        if ok:
            adopt("D", n, conv, b.shifts, k)
    if "D" in bounds:
        b = bounds["D"]
        base = _replay_base(src, b)
        conv = tuple(convert_d_to_x(base, list(b.witness)))
        n = priced_count(conv, "X")
        ok = _ends_match(base, b.witness, conv)
        relations.append(Relation("D->X", "D", "X", n, ok))
        if ok:
            adopt("X", n, conv, b.shifts, "D")

    # table unknotting numbers are exact crossing-change distances; via
    # the two-changes-per-toggle conversion they bound diagonals too
    if tgt is None and source_name is not None:
        entry = load_table().get(source_name)
        u = entry.unknotting if entry is not None else None
        if u is not None:
            notes.append(f"table crossing-change number for {source_name}: {u}")
            if "X" in bounds and u > bounds["X"].lower:
                bounds["X"] = replace(bounds["X"], lower=u)
            dlow = (u + 1) // 2
            if "D" in bounds and dlow > bounds["D"].lower:
                bounds["D"] = replace(bounds["D"], lower=dlow)
                notes.append(
                    f"diagonal lower bound {dlow}: each diagonal toggle "
                    "is at most two crossing changes")

    if "D" in bounds and "X" in bounds:
        ubd, ubx = bounds["D"].bound, bounds["X"].bound
        if not ubd <= ubx <= 2 * ubd:
            raise InvariantBreach(
                f"bound relation violated: {ubd} <= {ubx} <= {2 * ubd}")
        notes.append(f"consistency: {ubd} <= {ubx} <= 2*{ubd}")

    evidence = []
    try:
        evidence.append("source fingerprint " + fingerprint(src).text())
    except MultiComponent:
        pass
    if tgt is not None:
        evidence.append("target fingerprint " + fingerprint(tgt).text())
    for k in sorted(bounds):
        b = bounds[k]
        end = apply_program(_replay_base(src, b), list(b.witness))
        end_sd, _, _ = simplify(end)
        if tgt is None:
            hit = is_untangled(end_sd)
        else:
            hit = end_sd.canonical_text() == simplify(tgt)[0].canonical_text()
        evidence.append(
            f"{k} witness endpoint {'reaches' if hit else 'MISSES'} the target")
        if not hit:
            raise InvariantBreach(f"{k} witness endpoint does not reach the target")

    return DistanceReport(
        source=src.gauss_text(),
        target=tgt.gauss_text() if tgt is not None else "unknot",
        bounds=bounds,
        relations=tuple(relations),
        evidence=tuple(evidence),
        notes=tuple(notes),
    )
