"""Realizing crossing toggles and the toggle-style moves by move programs.

A "lasso" throws a finger of the strand over the rest of the diagram so
that one diagonal toggle (D13/D24 on a quadrilateral) changes a chosen
crossing, after which the scaffolding cancels by plain R-moves.  On top
of that we expand each composite move kind into a program of classical
moves plus diagonal toggles, convert programs between the toggle styles,
and replay the frozen certificate fixtures.

Builders search a small variant space (kink chirality, poke flavor and
lead sign) and validate every candidate by replaying it; the first
program whose end diagram matches the direct move is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codec import emit_gauss, fixture_path, parse_gauss
from .errors import (
    FixtureMissing,
    KnotError,
    NoMarkedSite,
    ReplayFailure,
    StaleSite,
    UncertifiedKind,
    ValidationError,
)
from .moves import (
    Site,
    Step,
    all_arcs,
    apply_move,
    apply_program,
    arc_text,
    find_sites,
    parse_program,
    polygons,
    _all_classical,
    _parse_ids,
)

# step kinds a certificate program may use: the classical calculus plus
# the diagonal toggles being demonstrated
CERT_STEP_KINDS = ("R1", "R1INS", "R2", "R2INS", "R3", "D13", "D24")

CERTIFIED_KINDS = ("X", "DELTA", "SHARP", "SHARPBAR", "GAMMA", "PASS", "FOUR", "NGON3")


def count_d(steps):
    """Number of diagonal toggles in a program."""
    return sum(1 for s in steps if s.kind in ("D13", "D24"))


def _try(d, step):
    try:
        return apply_move(d, step)
    except KnotError:
        return None


def _arc_variants(d, arc):
    """Descriptors for one arc; the wrap arc also gets its head-side form."""
    text = arc_text(d, arc)
    out = [text]
    ci, pi = arc
    if pi is not None and pi == len(d.components[ci]) - 1:
        out.append(text + "^")
    return out


def _arc_into(d, place):
    """The arc whose head is the given place (as a tail-place tuple)."""
    return d.pred(place)


# -- the lasso ----------------------------------------------------------


def _quad_step(d3, cid, p2):
    """Diagonal toggle hitting exactly {cid, p2} on some quad of d3."""
    for poly in polygons(d3, 4):
        corners = poly.corners
        if cid not in corners or p2 not in corners:
            continue
        if not _all_classical(d3, poly):
            continue
        i, j = corners.index(cid), corners.index(p2)
        if (i - j) % 4 != 2:
            continue  # not a diagonal pair
        kind = "D13" if {i, j} == {0, 2} else "D24"
        yield Step(kind, ",".join(str(c) for c in corners))


def lasso_program(d, cid):
    """A move program equivalent to toggling crossing ``cid``.

    Uses classical R-moves plus exactly one diagonal toggle, so that
    program D-counts stay predictable.  Raises ReplayFailure if no
    variant of the construction goes through.
    """
    cid = int(cid)
    if cid not in d.occurrences or d.kind_of(cid) != "classical":
        raise StaleSite(f"no classical crossing {cid}")
    target = apply_move(d, "X", str(cid)).canonical_text()

    for anchor in ("O", "U"):
        pa = next(p for p in d.occurrences[cid] if d.pass_at(p).role == anchor)
        for at1 in _arc_variants(d, _arc_into(d, pa)):
            for role1 in ("O", "U"):
                for sign1 in ("+", "-"):
                    s1 = Step("R1INS", f"{at1} {role1} {sign1}")
                    p1_id = d.fresh_id()
                    d1 = _try(d, s1)
                    if d1 is None:
                        continue
                    other = "U" if anchor == "O" else "O"
                    loop_at = f"{role1}{p1_id}>{'U' if role1 == 'O' else 'O'}{p1_id}"
                    pb = next(
                        p for p in d1.occurrences[cid] if d1.pass_at(p).role == other
                    )
                    at2 = arc_text(d1, _arc_into(d1, pb))
                    q1, q2 = d1.fresh_id(), d1.fresh_id() + 1
                    for over in ("A", "B"):
                        for flavor in ("par", "anti"):
                            for lead in ("+", "-"):
                                s2 = Step(
                                    "R2INS", f"{loop_at} {at2} {over} {flavor} {lead}"
                                )
                                d2 = _try(d1, s2)
                                if d2 is None:
                                    continue
                                prog = _lasso_close(d2, cid, p1_id, q1, q2, target)
                                if prog is not None:
                                    return [s1, s2] + prog
    raise ReplayFailure(f"no lasso variant toggles crossing {cid}")


def _lasso_close(d2, cid, p1_id, q1, q2, target):
    """Finish a lasso: second kink, one diagonal, then unwind."""
    # the second kink must subdivide a triangle through the changed
    # crossing, so only arcs touching the scaffold are worth kinking
    near = {cid, p1_id, q1, q2}
    cands = []
    for arc in all_arcs(d2):
        ci, pi = arc
        if pi is None:
            continue
        tail_cid = d2.pass_at(arc).cid
        head_cid = d2.pass_at(d2.succ(arc)).cid
        if tail_cid in near or head_cid in near:
            cands.extend(_arc_variants(d2, arc))
    unwind_r2 = Step("R2", f"{min(q1, q2)},{max(q1, q2)}")
    unwind_p1 = Step("R1", str(p1_id))
    for at3 in cands:
        for role3 in ("O", "U"):
            for sign3 in ("+", "-"):
                s3 = Step("R1INS", f"{at3} {role3} {sign3}")
                p2_id = d2.fresh_id()
                d3 = _try(d2, s3)
                if d3 is None:
                    continue
                for sd in _quad_step(d3, cid, p2_id):
                    d4 = _try(d3, sd)
                    if d4 is None:
                        continue
                    tail = [Step("R1", str(p2_id)), unwind_r2, unwind_p1]
                    try:
                        out = apply_program(d4, tail)
                    except ReplayFailure:
                        continue
                    if out.canonical_text() == target:
                        return [s3, sd] + tail
    return None


# -- composite-move macros ----------------------------------------------


def _validated(d, steps, target_text, what):
    got = apply_program(d, steps).canonical_text()
    if got != target_text:
        raise ReplayFailure(f"{what}: macro replay does not match the direct move")
    return steps


def _macro_x(d, locator):
    return lasso_program(d, locator)


def _macro_delta(d, locator):
    target = apply_move(d, "DELTA", locator).canonical_text()
    ids = _parse_ids(locator, 3)
    for corner in ids:
        try:
            first = lasso_program(d, corner)
            d1 = apply_program(d, first)
            slide = Step("R3", locator)
            d2 = _try(d1, slide)
            if d2 is None:
                continue
            second = lasso_program(d2, corner)
            steps = first + [slide] + second
            return _validated(d, steps, target, "DELTA")
        except (ReplayFailure, StaleSite):
            continue
    raise ReplayFailure(f"no lasso pair realizes DELTA at {locator}")


def _clasp_quad(d, a, b, locator, kind):
    """Kink both sides of a 2-gon, toggle its {a,b} diagonal, unkink."""
    target = apply_move(d, kind, locator).canonical_text()
    for poly in polygons(d, 2):
        if frozenset(poly.corners) != frozenset((a, b)):
            continue
        side_arcs = [side[0] for side in poly.sides]
        for at1 in _arc_variants(d, side_arcs[0]):
            for role1 in ("O", "U"):
                for sign1 in ("+", "-"):
                    s1 = Step("R1INS", f"{at1} {role1} {sign1}")
                    p1_id = d.fresh_id()
                    d1 = _try(d, s1)
                    if d1 is None:
                        continue
                    # the first kink subdivided one side; kink any arc
                    # still running directly between the clasp crossings
                    at2_opts = []
                    for arc in all_arcs(d1):
                        ci, pi = arc
                        if pi is None:
                            continue
                        t = d1.pass_at(arc).cid
                        h = d1.pass_at(d1.succ(arc)).cid
                        if {t, h} == {a, b}:
                            at2_opts.extend(_arc_variants(d1, arc))
                    for at2 in at2_opts:
                        for role2 in ("O", "U"):
                            for sign2 in ("+", "-"):
                                s2 = Step("R1INS", f"{at2} {role2} {sign2}")
                                p2_id = d1.fresh_id()
                                d2 = _try(d1, s2)
                                if d2 is None:
                                    continue
                                for sd in _quad_step(d2, a, b):
                                    d3 = _try(d2, sd)
                                    if d3 is None:
                                        continue
                                    tail = [
                                        Step("R1", str(p1_id)),
                                        Step("R1", str(p2_id)),
                                    ]
                                    try:
                                        out = apply_program(d3, tail)
                                    except ReplayFailure:
                                        continue
                                    if out.canonical_text() == target:
                                        return [s1, s2, sd] + tail
    raise ReplayFailure(f"no kink pair realizes {kind} at {locator}")


def _macro_gamma(d, locator):
    a, b = _parse_ids(locator, 2)
    return _clasp_quad(d, a, b, locator, "GAMMA")


def _macro_band(d, kind, locator):
    """Sharp, bar-sharp and pass moves are the two diagonals in a row."""
    target = apply_move(d, kind, locator).canonical_text()
    steps = [Step("D13", locator), Step("D24", locator)]
    return _validated(d, steps, target, kind)


def _macro_four(d, locator):
    target = apply_move(d, "FOUR", locator).canonical_text()
    ids = _parse_ids(locator, 4)
    # toggling an adjacent pair in the twist row turns both of its
    # neighbours into pokes; the middle pair is the natural choice
    for i, j in ((1, 2), (0, 1), (2, 3), (0, 3)):
        pair = sorted((ids[i], ids[j]))
        rest = sorted(c for c in ids if c not in pair)
        try:
            g = _clasp_quad(d, pair[0], pair[1], f"{pair[0]},{pair[1]}", "GAMMA")
        except (ReplayFailure, StaleSite):
            continue
        # pair up each toggled crossing with one untouched neighbour
        for split in (
            ((pair[0], rest[0]), (pair[1], rest[1])),
            ((pair[0], rest[1]), (pair[1], rest[0])),
        ):
            steps = list(g)
            ok = True
            cur = apply_program(d, g)
            for x, y in split:
                st = Step("R2", f"{min(x, y)},{max(x, y)}")
                nxt = _try(cur, st)
                if nxt is None:
                    ok = False
                    break
                steps.append(st)
                cur = nxt
            if ok and cur.canonical_text() == target:
                return steps
    raise ReplayFailure(f"no clasp-and-cancel variant realizes FOUR at {locator}")


def _macro_ngon(d, kind, locator):
    n = int(kind[4:])
    target = apply_move(d, kind, locator).canonical_text()
    ids = _parse_ids(locator, n)
    steps = []
    cur = d
    for cid in ids:
        part = lasso_program(cur, cid)
        steps.extend(part)
        cur = apply_program(cur, part)
    return _validated(d, steps, target, kind)


def macro_program(d, kind, locator=None):
    """Expand one composite move into classical moves plus diagonals.

    Returns a program whose replay equals applying the move directly.
    """
    if isinstance(kind, (Site, Step)):
        kind, locator = kind.kind, kind.locator
    if locator is None:
        raise ValidationError("macro_program needs a locator")
    if kind == "X":
        return _macro_x(d, locator)
    if kind == "DELTA":
        return _macro_delta(d, locator)
    if kind == "GAMMA":
        return _macro_gamma(d, locator)
    if kind in ("SHARP", "SHARPBAR", "PASS"):
        return _macro_band(d, kind, locator)
    if kind == "FOUR":
        return _macro_four(d, locator)
    if kind.startswith("NGON"):
        return _macro_ngon(d, kind, locator)
    raise UncertifiedKind(f"no macro expansion for kind {kind!r}")


# -- converting between toggle styles -----------------------------------

_TOGGLE_PAIRS = {
    "D13": (0, 2),
    "D24": (1, 3),
}


def convert_d_to_x(d, steps):
    """Rewrite diagonal toggles as single-crossing toggles.

    Band moves and polygon toggles also unfold.  The returned program
    replays to the same end diagram; each rewrite is checked in place.
    """
    if isinstance(steps, str):
        steps = parse_program(steps)
    out = []
    cur = d
    for step in steps:
        if step.kind in _TOGGLE_PAIRS:
            ids = _parse_ids(step.locator, 4)
            i, j = _TOGGLE_PAIRS[step.kind]
            repl = [Step("X", str(ids[i])), Step("X", str(ids[j]))]
        elif step.kind in ("SHARP", "SHARPBAR", "PASS"):
            ids = _parse_ids(step.locator, 4)
            repl = [Step("X", str(c)) for c in ids]
        elif step.kind == "GAMMA":
            ids = _parse_ids(step.locator, 2)
            repl = [Step("X", str(c)) for c in ids]
        elif step.kind.startswith("NGON"):
            ids = _parse_ids(step.locator)
            repl = [Step("X", str(c)) for c in ids]
        else:
            repl = None
        if repl is None:
            cur = apply_move(cur, step)
            out.append(step)
        else:
            want = apply_move(cur, step)
            got = apply_program(cur, repl)
            if got.canonical_text() != want.canonical_text():
                raise ReplayFailure(f"toggle expansion of {step.text()} diverges")
            cur = want
            out.extend(repl)
    return out


def convert_to_d(d, steps):
    """Rewrite single-crossing toggles as lassos; expand composite moves.

    The result uses only classical moves and diagonal toggles.
    """
    if isinstance(steps, str):
        steps = parse_program(steps)
    out = []
    cur = d
    for step in steps:
        if step.kind == "X":
            repl = lasso_program(cur, step.locator)
        elif step.kind in ("DELTA", "GAMMA", "SHARP", "SHARPBAR", "PASS", "FOUR") or (
            step.kind.startswith("NGON")
        ):
            repl = macro_program(cur, step)
        else:
            repl = [step]
        nxt = apply_program(cur, repl)
        if repl != [step]:
            want = apply_move(cur, step)
            if nxt.canonical_text() != want.canonical_text():
                raise ReplayFailure(f"lasso expansion of {step.text()} diverges")
        out.extend(repl)
        cur = nxt
    return out


# -- certificates -------------------------------------------------------

# one frozen program file per move kind; the n-gon programs are
# generated on demand instead
FIXTURE_FILES = {
    "X": "macros/fig4.x.prog",
    "DELTA": "macros/fig5.delta.prog",
    "SHARP": "macros/fig6.sharp.prog",
    "PASS": "macros/fig7.pass.prog",
    "GAMMA": "macros/fig8.gamma.prog",
    "FOUR": "macros/fig9.four.prog",
    "SHARPBAR": "macros/sharpbar.prog",
}

# closed diagrams carrying a 3-, 4- and 5-sided polygon of classical
# crossings, used when generating n-gon programs
_NGON_CONTEXTS = {
    3: "O1+,U2+,O3+,U1+,O2+,U3+",
    4: "O1+,U2+,O3+,U4+;U1+,O2+,U3+,O4+",
    5: "O1+,U2+,O3+,U4+,O5+,U1+,O2+,U3+,O4+,U5+",
}


@dataclass(frozen=True)
class RealizationCertificate:
    kind: str
    mode: str
    context: str  # gauss text of the replay diagram
    target: Step  # the move being realized
    steps: tuple  # the realizing program
    d_count: int
    verdict: bool  # replay endpoint equals the direct move

    def text(self):
        lines = [f"mode {self.mode}", f"context {self.context}"]
        lines.append(f"target {self.target.text()}")
        lines.extend(f"step {s.text()}" for s in self.steps)
        return "\n".join(lines) + "\n"


def parse_certificate(text):
    mode = None
    context = None
    target = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split(None, 1)
        key = toks[0]
        rest = toks[1].strip() if len(toks) > 1 else ""
        if key == "mode":
            mode = rest
        elif key == "context":
            context = rest
        elif key == "target":
            k, loc = rest.split(None, 1)
            target = Step(k, loc.strip())
        elif key == "step":
            k, loc = rest.split(None, 1)
            steps.append(Step(k, loc.strip()))
        else:
            raise ValidationError(f"certificate line {lineno}: unknown key {key!r}")
    if not (mode and context and target and steps):
        raise ValidationError("certificate needs mode, context, target and steps")
    return mode, context, target, steps


def certify_program(kind, steps, context, target=None):
    """Replay a program against the direct move; never trust a count.

    ``context`` is a diagram (or Gauss text) containing the move's site;
    without an explicit ``target`` the first enumerated site of the kind
    is the marked one.  The verdict records whether the replay endpoint
    matches the move applied directly.
    """
    if isinstance(context, str):
        context = parse_gauss(context)
    if isinstance(steps, str):
        steps = parse_program(steps)
    steps = list(steps)
    for s in steps:
        if s.kind not in CERT_STEP_KINDS:
            raise ValidationError(f"certificate step kind {s.kind!r} not allowed")
    if target is None:
        sites = find_sites(context, kind)
        if not sites:
            raise NoMarkedSite(f"context has no {kind} site")
        target = sites[0]
    if isinstance(target, Site):
        target = Step(target.kind, target.locator)
    try:
        want = apply_move(context, target).canonical_text()
    except KnotError:
        raise NoMarkedSite(f"{target.text()} does not apply to the context") from None
    got = apply_program(context, steps).canonical_text()
    return RealizationCertificate(
        kind,
        context.mode,
        emit_gauss(context),
        target,
        tuple(steps),
        count_d(steps),
        got == want,
    )


def expand_macro(kind, path=None, host=False):
    """Certificate for one move kind.

    Most kinds replay their frozen fixture program; NGONn builds its
    program on the spot (one lasso per polygon corner).  ``host`` picks
    the larger-diagram variant of a fixture, used to catch rewrites that
    only work in the minimal closure.
    """
    kind = str(kind).upper().replace("(", "").replace(")", "")
    if kind.startswith("NGON"):
        try:
            ctx = _NGON_CONTEXTS[int(kind[4:])]
        except (KeyError, ValueError):
            raise UncertifiedKind(f"no n-gon context for kind {kind!r}") from None
        d = parse_gauss(ctx)
        sites = find_sites(d, kind)
        if not sites:
            raise NoMarkedSite(f"n-gon context has no {kind} site")
        steps = macro_program(d, sites[0])
        return certify_program(kind, steps, d, target=sites[0])
    if path is None:
        name = FIXTURE_FILES.get(kind)
        if name is None:
            raise UncertifiedKind(f"no certificate fixture for kind {kind!r}")
        if host:
            name = name[: -len(".prog")] + ".host.prog"
        path = fixture_path(name)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise FixtureMissing(f"certificate fixture not found: {path}") from None
    mode, context, target, steps = parse_certificate(text)
    return certify_program(kind, steps, parse_gauss(context, mode=mode), target=target)


def certify_all():
    """Certificates for every supported kind, in declaration order."""
    return [expand_macro(k) for k in CERTIFIED_KINDS]
