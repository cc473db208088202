"""Unknotting driver: descending toggles plus greedy simplification.

Scanning a diagram from its basepoints, a crossing is "early-over" if
the first pass met on it goes over.  Toggling every crossing that fails
this makes the diagram descending, and a descending diagram untangles
by ordinary moves; that gives an explicit, replayable unknotting
program whose toggle count bounds the unknotting number from above.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import WELDED, build_diagram
from .errors import BudgetExhausted, KnotError, ValidationError
from .moves import Step, apply_move, apply_program, find_sites
from .realize import count_d, lasso_program

_REDUCERS = ("R1", "R2", "V1", "V2")
_SHUFFLES = ("R3", "V3", "MIXED", "OC")


def is_trivial(d):
    return all(not comp for comp in d.components)


def is_untangled(d):
    """Nothing left to undo.

    Classically that means no crossings at all; in welded mode leftover
    virtual crossings are fine, since only classical ones carry
    over/under information.
    """
    if d.mode == WELDED:
        return not d.signs
    return is_trivial(d)


def descending_change_set(d):
    """Classical crossings whose first scanned pass goes under."""
    out = []
    for cid, places in d.occurrences.items():
        if cid not in d.signs:
            continue  # virtual crossings have no over side to fix
        if d.pass_at(places[0]).role == "U":
            out.append(cid)
    return out


def is_descending(d):
    """Every classical crossing is met over before under from the basepoint."""
    return not descending_change_set(d)


def descending_program(d, style="D"):
    """Toggle program making the diagram descending.

    The default 'D' style expands each change into a lasso, so the
    program uses classical moves plus one diagonal toggle per change;
    style 'X' keeps the raw crossing toggles instead.
    """
    if style not in ("X", "D"):
        raise ValidationError(f"style must be 'X' or 'D', not {style!r}")
    steps = []
    cur = d
    for cid in descending_change_set(d):
        if style == "X":
            part = [Step("X", str(cid))]
        else:
            part = lasso_program(cur, cid)
        steps.extend(part)
        cur = apply_program(cur, part)
    return steps


def _first_reduction(d):
    for kind in _REDUCERS:
        sites = find_sites(d, kind)
        if sites:
            return sites[0]
    return None


def simplify(d, budget=100000, escape_depth=2):
    """Greedy monotone reduction with a bounded shuffle escape.

    Applies crossing-removing moves while any exist; when stuck, does a
    breadth-first search over triangle slides (depth ``escape_depth``)
    for a position where a reduction reappears.  Returns
    ``(diagram, steps, moves_used)``; raises BudgetExhausted (with the
    partial result attached) if the budget runs out mid-flight.
    """
    steps = []
    cur = d
    used = 0

    def spend(n=1):
        nonlocal used
        used += n
        if used > budget:
            raise BudgetExhausted(
                f"simplification budget {budget} exhausted", partial=(cur, steps, used)
            )

    while True:
        site = _first_reduction(cur)
        if site is not None:
            spend()
            cur = apply_move(cur, site)
            steps.append(Step(site.kind, site.locator))
            continue
        if is_trivial(cur):
            return cur, steps, used
        # stuck: breadth-first over shuffle moves for an exit
        frontier = [(cur, [])]
        seen = {cur.canonical_text()}
        exit_path = None
        for _ in range(escape_depth):
            nxt = []
            for state, path in frontier:
                for kind in _SHUFFLES:
                    for site in find_sites(state, kind):
                        spend()
                        try:
                            cand = apply_move(state, site)
                        except KnotError:
                            continue
                        key = cand.canonical_text()
                        if key in seen:
                            continue
                        seen.add(key)
                        cand_path = path + [Step(site.kind, site.locator)]
                        if _first_reduction(cand) is not None:
                            exit_path = cand_path
                            break
                        nxt.append((cand, cand_path))
                    if exit_path:
                        break
                if exit_path:
                    break
            if exit_path:
                break
            frontier = nxt
            if not frontier:
                break
        if exit_path is None:
            return cur, steps, used
        for step in exit_path:
            cur = apply_move(cur, step)
            steps.append(step)


@dataclass(frozen=True)
class UnknotReport:
    start: str
    mode: str
    trivial: bool
    changes: tuple  # crossing ids toggled (in the pre-simplified diagram)
    pre: tuple  # simplification before any toggle
    toggles: tuple  # the change program (X steps or lasso expansion)
    post: tuple  # simplification afterwards
    final: str
    moves_used: int
    basepoint_shifts: tuple = field(default=())

    @property
    def change_count(self):
        return len(self.changes)

    @property
    def d_count(self):
        return count_d(self.toggles)

    @property
    def program(self):
        return list(self.pre) + list(self.toggles) + list(self.post)

    @property
    def tallies(self):
        out = {}
        for s in self.program:
            out[s.kind] = out.get(s.kind, 0) + 1
        return out

    def as_dict(self):
        return {
            "start": self.start,
            "mode": self.mode,
            "trivial": self.trivial,
            "changes": list(self.changes),
            "change_count": self.change_count,
            "d_count": self.d_count,
            "basepoint_shifts": list(self.basepoint_shifts),
            "program": [s.text() for s in self.program],
            "tallies": self.tallies,
            "final": self.final,
            "moves_used": self.moves_used,
        }

    def text(self):
        lines = [
            f"start   {self.start}",
            f"mode    {self.mode}",
            f"changes {self.change_count}"
            + (f" at crossings {','.join(str(c) for c in self.changes)}" if self.changes else ""),
        ]
        if self.basepoint_shifts and any(self.basepoint_shifts):
            lines.append(
                "shifts  " + ",".join(str(k) for k in self.basepoint_shifts)
            )
        lines.extend(f"  {s.text()}" for s in self.program)
        lines.append(f"final   {self.final}")
        lines.append("trivial yes" if self.trivial else "trivial NO")
        return "\n".join(lines)


def _shifted(d, shifts):
    comps = []
    for ci, comp in enumerate(d.components):
        k = shifts[ci] % len(comp) if comp else 0
        rolled = comp[k:] + comp[:k]
        comps.append([(p.role, p.cid, d.signs.get(p.cid, 0)) for p in rolled])
    return build_diagram(comps, d.mode)


def unknot(d, budget=100000, style="D", sweep=False):
    """Full pipeline: simplify, toggle to descending, simplify again.

    With ``sweep`` the basepoint of each component is rotated to
    minimize the toggle count before committing.  The report's program
    replays from the (possibly shifted) start diagram.
    """
    shifts = tuple(0 for _ in d.components)
    if sweep:
        # basepoints are tried component by component; keeping a zero
        # shift in every candidate set means the greedy walk never ends
        # worse than not sweeping, though for links it need not be the
        # global optimum

        def cost(shift_vec):
            trial = _shifted(d, shift_vec)
            try:
                reduced, _, _ = simplify(trial, budget)
            except BudgetExhausted:
                return len(trial.signs) + 1
            return len(descending_change_set(reduced))

        cur_shift = []
        for ci, comp in enumerate(d.components):
            rest = [0] * (len(d.components) - ci - 1)
            best_k, best_cost = 0, None
            for k in range(max(len(comp), 1)):
                c = cost(cur_shift + [k] + rest)
                if best_cost is None or c < best_cost:
                    best_k, best_cost = k, c
            cur_shift.append(best_k)
        shifts = tuple(cur_shift)
        d = _shifted(d, shifts)

    start_text = d.gauss_text()
    pre_d, pre_steps, used1 = simplify(d, budget)
    changes = tuple(descending_change_set(pre_d))
    toggles = tuple(descending_program(pre_d, style))
    mid = apply_program(pre_d, toggles)
    post_d, post_steps, used2 = simplify(mid, budget - used1 if budget > used1 else 0)
    return UnknotReport(
        start=start_text,
        mode=d.mode,
        trivial=is_untangled(post_d),
        changes=changes,
        pre=tuple(pre_steps),
        toggles=toggles,
        post=tuple(post_steps),
        final=post_d.gauss_text(),
        moves_used=used1 + len(toggles) + used2,
        basepoint_shifts=shifts,
    )
