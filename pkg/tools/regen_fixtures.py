#!/usr/bin/env python3
"""Regenerate the frozen fixtures (knot table and move certificates).

Everything here is derivable, but the shipped files are frozen so the
test suite replays known-good data instead of trusting the generators.
Run from the repository root:

    python3 tools/regen_fixtures.py [--check]

With --check, regenerate in memory and diff against the shipped files
instead of rewriting them.
"""

import argparse
import os
import re
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from knotctl.codec import emit_gauss, parse_gauss  # noqa: E402
from knotctl.diagram import build_diagram  # noqa: E402
from knotctl.errors import KnotError  # noqa: E402
from knotctl.invariants import alexander  # noqa: E402
from knotctl.laurent import Laurent  # noqa: E402
from knotctl.moves import Step, find_sites  # noqa: E402
from knotctl.realize import certify_program, macro_program  # noqa: E402

FIXDIR = os.path.join(os.path.dirname(__file__), "..", "src", "knotctl", "fixtures")


# -- braid closures ------------------------------------------------------


def braid_closure(word, strands):
    """Diagram of the closed braid; letters are +-1..+-(strands-1).

    A positive letter takes the strand in its left position over the one
    to its right; both conventions only differ by mirror image, which
    the Alexander check below cannot see anyway.
    """
    at = list(range(strands))  # position -> strand index
    visits = [[] for _ in range(strands)]  # per strand: (role, cid, sign)
    for j, letter in enumerate(word, 1):
        i = abs(letter) - 1
        a, b = at[i], at[i + 1]
        sign = 1 if letter > 0 else -1
        over, under = (a, b) if letter > 0 else (b, a)
        visits[over].append(("O", j, sign))
        visits[under].append(("U", j, sign))
        at[i], at[i + 1] = b, a
    # closure: bottom position p rejoins top position p
    perm = {at[p]: p for p in range(strands)}  # strand -> final position
    comps = []
    seen = set()
    for start in range(strands):
        if start in seen:
            continue
        chain = []
        s = start
        while s not in seen:
            seen.add(s)
            chain.extend(visits[s])
            s = perm[s]
        comps.append(chain)
    return build_diagram(comps, "classical")


def _knot_closure_or_none(word, strands):
    try:
        d = braid_closure(word, strands)
    except KnotError:
        return None
    if len(d.components) != 1:
        return None
    return d


def find_knot_word(target_alex, strands_opts, max_len, candidates=()):
    """First braid word whose closure is a knot with the wanted polynomial."""
    want = target_alex.normalized().text()
    for word, strands in candidates:
        d = _knot_closure_or_none(word, strands)
        if d is not None and alexander(d).text() == want:
            return word, strands, d
    for strands in strands_opts:
        letters = [g for k in range(1, strands) for g in (k, -k)]
        stack = [[1]]  # fix the first letter; conjugates close the same knot
        while stack:
            word = stack.pop()
            if len(word) >= 4:
                d = _knot_closure_or_none(word, strands)
                if d is not None and alexander(d).text() == want:
                    return word, strands, d
            if len(word) < max_len:
                for g in letters:
                    if g == -word[-1]:
                        continue  # cancelling pair, reducible
                    stack.append(word + [g])
    raise SystemExit(f"no braid word found for {want}")


# -- the knot table ------------------------------------------------------

TORUS = {
    "3_1": 3,
    "5_1": 5,
    "7_1": 7,
    "9_1": 9,
}

# alexander polynomials, ascending coefficients from degree 0
TABLE_ALEX = {
    "3_1": [1, -1, 1],
    "4_1": [1, -3, 1],
    "5_1": [1, -1, 1, -1, 1],
    "5_2": [2, -3, 2],
    "6_1": [2, -5, 2],
    "7_1": [1, -1, 1, -1, 1, -1, 1],
    "8_1": [3, -7, 3],
    "9_1": [1, -1, 1, -1, 1, -1, 1, -1, 1],
}

UNKNOTTING = {
    "3_1": 1,
    "4_1": 1,
    "5_1": 2,
    "5_2": 1,
    "6_1": 1,
    "7_1": 3,
    "8_1": 1,
    "9_1": 4,
}

# braid words worth trying before searching (well-known closures)
KNOWN_WORDS = {
    "4_1": ([([1, -2, 1, -2], 3)]),
    "5_2": ([([1, 1, 1, 2, -1, 2], 3), ([1, 1, 2, 2, 1, -2], 3)]),
    "6_1": ([([1, 1, 2, -1, 2, 3, -2, 3], 4), ([1, 1, 2, -3, -2, -2, -3], 4)]),
    "8_1": ([([1, 1, 2, -1, 2, 2, 2, 2], 3),]),
}


def torus_code(q):
    comp = [
        ("O" if i % 2 == 0 else "U", i % q + 1, 1) for i in range(2 * q)
    ]
    return build_diagram([comp], "classical")


def twist_extend(base, want_text):
    """Add two full twists to some band of ``base`` to reach a new knot.

    Tries every four-insertion and keeps the first one whose result has
    the wanted polynomial; turns the 2-twist knot into the 6-twist one.
    """
    from knotctl.moves import apply_move

    for site in find_sites(base, "FOURINS"):
        try:
            cand = apply_move(base, site)
        except KnotError:
            continue
        if alexander(cand).text() == want_text:
            return cand
    raise SystemExit(f"no twist extension reaches {want_text}")


def gen_table():
    lines = ["# name | gauss | alexander | u:<n>"]
    diagrams = {}
    for name in TABLE_ALEX:
        alex = Laurent({e: c for e, c in enumerate(TABLE_ALEX[name]) if c})
        want = alex.normalized().text()
        if name in TORUS:
            d = torus_code(TORUS[name])
            got = alexander(d).text()
            if got != want:
                raise SystemExit(f"{name}: torus code gives {got}")
        elif name == "8_1":
            d = twist_extend(diagrams["4_1"], want)
            print(f"  {name}: four-insertion on the 4_1 band")
        else:
            word, strands, d = find_knot_word(
                alex, (3, 4), 8, KNOWN_WORDS.get(name, ())
            )
            print(f"  {name}: braid {word} on {strands} strands")
        diagrams[name] = d
        lines.append(f"{name} | {emit_gauss(d)} | {want} | u:{UNKNOTTING[name]}")
    return "\n".join(lines) + "\n"


# -- move certificates ---------------------------------------------------

TREFOIL = "O1+,U2+,O3+,U1+,O2+,U3+"

# per kind: fixture file, smallest closure showing the move, marked
# locator (None = first enumerated site).  A second ".host" variant of
# each file re-derives the program with a trefoil lying alongside, so
# the programs are checked in a crowded diagram too.
CONTEXTS = {
    "X": ("macros/fig4.x.prog", "O1+,U1+", "1"),
    "DELTA": ("macros/fig5.delta.prog", TREFOIL, None),
    "SHARP": ("macros/fig6.sharp.prog", "O1+,O4-,O5+,O2-,O3+,U1+,U2-,U5+,U4-,U3+", None),
    "PASS": ("macros/fig7.pass.prog", "O1+,O3-,O4+,O2-;U1+,U3-,U4+,U2-", None),
    "GAMMA": ("macros/fig8.gamma.prog", "O1+,U2+;O2+,U1+", None),
    "FOUR": ("macros/fig9.four.prog", "O1+,U2+,O3+,U4+;U1+,O2+,U3+,O4+", None),
    "SHARPBAR": ("macros/sharpbar.prog", "O1+,O3+,O4-,O2-;U1+,U2-;U3+,U4-", None),
}


def host_code(code):
    """The same closure with a trefoil floating next to it."""
    top = max(int(m) for m in re.findall(r"\d+", code))
    extra = re.sub(r"\d+", lambda m: str(int(m.group()) + top), TREFOIL)
    return code + ";" + extra


def gen_certificates():
    out = {}
    for kind, (rel, code, loc) in CONTEXTS.items():
        if loc is None:
            sites = find_sites(parse_gauss(code), kind)
            if not sites:
                raise SystemExit(f"{kind}: no {kind} site in context {code}")
            loc = sites[0].locator
        host_rel = rel[: -len(".prog")] + ".host.prog"
        for name, ctx in ((rel, code), (host_rel, host_code(code))):
            d = parse_gauss(ctx)
            steps = macro_program(d, kind, loc)
            cert = certify_program(kind, steps, d, target=Step(kind, loc))
            if not cert.verdict:
                raise SystemExit(f"{kind}: generated program fails replay in {name}")
            out[name] = cert.text()
            print(f"  {name}: {len(steps)} steps, {cert.d_count} diagonal toggle(s)")
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="diff instead of writing")
    args = ap.parse_args()

    files = {"table.txt": gen_table()}
    files.update(gen_certificates())

    bad = 0
    for rel, text in files.items():
        path = os.path.join(FIXDIR, rel)
        if args.check:
            try:
                with open(path, encoding="utf-8") as fh:
                    old = fh.read()
            except FileNotFoundError:
                old = None
            if old != text:
                print(f"STALE {rel}")
                bad += 1
            else:
                print(f"ok    {rel}")
        else:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
            print(f"wrote {rel}")
    if bad:
        raise SystemExit(f"{bad} fixture(s) out of date")


if __name__ == "__main__":
    main()
