"""Independent reference implementations used by the test suite.

Everything here is deliberately written from scratch against the format
definitions, not by calling into knotctl internals, so that agreement
between an oracle and the engine actually means something.  The only
engine types that appear are plain strings (Gauss codes, PD codes).
"""

import itertools
import random
import re

# --- tiny stand-alone Gauss reader -----------------------------------
# one component, classical passes only: "O1+,U2-,..."


def parse_simple(code):
    out = []
    for tok in code.split(","):
        role, rest = tok[0], tok[1:]
        sign = rest[-1]
        out.append((role, int(rest[:-1]), 1 if sign == "+" else -1))
    return out


# --- exhaustive small-code generator ----------------------------------


def chord_sequences(n):
    """All first-visit-canonical double occurrence sequences on n symbols."""
    out = []

    def rec(seq, used_twice, next_new):
        if len(seq) == 2 * n:
            out.append(tuple(seq))
            return
        for s in sorted(set(seq) - used_twice):
            rec(seq + [s], used_twice | {s}, next_new)
        if next_new <= n:
            rec(seq + [next_new], used_twice, next_new + 1)

    rec([], set(), 1)
    return out


def small_codes(n):
    """Every canonical one-component signed code with exactly n crossings."""
    for seq in chord_sequences(n):
        first = {}
        for i, s in enumerate(seq):
            first.setdefault(s, i)
        for roles in itertools.product("OU", repeat=n):
            for signs in itertools.product("+-", repeat=n):
                toks = []
                for i, s in enumerate(seq):
                    if first[s] == i:
                        r = roles[s - 1]
                    else:
                        r = "U" if roles[s - 1] == "O" else "O"
                    toks.append(f"{r}{s}{signs[s - 1]}")
                yield ",".join(toks)


# --- realizability by rotation-system genus ---------------------------
# Build the 4-valent ribbon graph with a fixed chirality per crossing
# sign and count faces; the code is planar iff V - E + F == 2.  A global
# reflection preserves genus, so the chirality choice does not matter.


def _rotation(seq):
    sign_of = {cid: sg for role, cid, sg in seq}
    rot = {}
    for cid, sg in sign_of.items():
        oo, uo, oi, ui = ("o-out", cid), ("u-out", cid), ("o-in", cid), ("u-in", cid)
        order = [oo, uo, oi, ui] if sg > 0 else [oo, ui, oi, uo]
        for a, b in zip(order, order[1:] + order[:1]):
            rot[a] = b
    return rot


def _twin(seq):
    n2 = len(seq)
    twin = {}
    for i, (role, cid, sg) in enumerate(seq):
        nrole, ncid, _ = seq[(i + 1) % n2]
        a = (("o-out" if role == "O" else "u-out"), cid)
        b = (("o-in" if nrole == "O" else "u-in"), ncid)
        twin[a] = b
        twin[b] = a
    return twin


def faces(seq):
    """Face boundaries as lists of (depart_dart, arrive_dart) per side."""
    rot, twin = _rotation(seq), _twin(seq)
    out = []
    seen = set()
    for start in sorted(rot):
        if start in seen:
            continue
        cyc = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            arr = twin[cur]
            cyc.append((cur, arr))
            cur = rot[arr]
        out.append(cyc)
    return out


def brute_realizable(code):
    seq = parse_simple(code)
    n = len(seq) // 2
    if n == 0:
        return True
    return n - 2 * n + len(faces(seq)) == 2


# --- brute site matchers ----------------------------------------------
# All matchers return sets of frozensets of crossing ids, which is what
# the engine's locators reduce to for these kinds.


def _occ(seq):
    d = {}
    for i, (role, cid, sg) in enumerate(seq):
        d.setdefault(cid, []).append(i)
    return d


def _curls(seq):
    n2 = len(seq)
    out = set()
    for cid, (i, j) in _occ(seq).items():
        if (j - i) % n2 == 1 or (i - j) % n2 == 1:
            out.add(cid)
    return out


def _dart_role(dart):
    return "O" if dart[0].startswith("o") else "U"


def brute_r1(seq):
    return {frozenset([cid]) for cid in _curls(seq)}


def brute_r2(seq):
    """Poke bigon faces: one side over at both ends, the other under."""
    out = set()
    for face in faces(seq):
        if len(face) != 2:
            continue
        (d1, a1), (d2, a2) = face
        if a1[1] == a2[1]:
            continue
        s1 = {_dart_role(d1), _dart_role(a1)}
        s2 = {_dart_role(d2), _dart_role(a2)}
        if {"O"} in (s1, s2) and {"U"} in (s1, s2):
            out.add(frozenset([a1[1], a2[1]]))
    return out


def brute_gamma(seq):
    """Clasp bigon faces: both sides mixed-role, equal crossing signs."""
    sign_of = {cid: sg for role, cid, sg in seq}
    out = set()
    for face in faces(seq):
        if len(face) != 2:
            continue
        (d1, a1), (d2, a2) = face
        c1, c2 = a1[1], a2[1]
        if c1 == c2:
            continue
        s1 = {_dart_role(d1), _dart_role(a1)}
        s2 = {_dart_role(d2), _dart_role(a2)}
        if s1 == {"O", "U"} and s2 == {"O", "U"} and sign_of[c1] == sign_of[c2]:
            out.add(frozenset([c1, c2]))
    return out


def brute_triangles(seq):
    """(slide_sites, toggle_sites): triangle faces with three distinct,
    curl-free corners, split by whether one side is over at both its
    corners (slide) or the over passes cycle around (toggle)."""
    curls = _curls(seq)
    slide, toggle = set(), set()
    for face in faces(seq):
        if len(face) != 3:
            continue
        corners = [arr[1] for dep, arr in face]
        if len(set(corners)) != 3 or set(corners) & curls:
            continue
        wins = [0, 0, 0]
        for i in range(3):
            dep, arr = face[i]
            if _dart_role(arr) == "O":
                wins[i] += 1
            else:
                wins[(i + 1) % 3] += 1
        if sorted(wins) == [1, 1, 1]:
            toggle.add(frozenset(corners))
        else:
            slide.add(frozenset(corners))
    return slide, toggle


def brute_x(seq):
    return {frozenset([cid]) for cid in _occ(seq)}


def chain_ngons(seq, n):
    """n-cycles of code segments joined through both passes of distinct
    corner crossings.  This is the pattern-matching notion of an n-gon:
    it does not ask the cycle to bound a face."""
    n2 = len(seq)
    occ = _occ(seq)

    def other(place):
        i, j = occ[seq[place][1]]
        return j if place == i else i

    def steps(place):
        return [(place + 1) % n2, (place - 1) % n2]

    out = set()

    def extend(path, corners):
        end = path[-1][1]
        cid = seq[end][1]
        if cid in corners:
            return
        if len(path) == n:
            if other(end) == path[0][0]:
                out.add(frozenset(corners + (cid,)))
            return
        hop = other(end)
        for nxt in steps(hop):
            extend(path + [(hop, nxt)], corners + (cid,))

    for start in range(n2):
        for nxt in steps(start):
            extend([(start, nxt)], ())
    return out


def twist_windows(seq):
    """Pairs of complementary four-pass runs over the same four crossings."""
    n2 = len(seq)
    runs = []
    for start in range(n2):
        ps = [seq[(start + k) % n2] for k in range(4)]
        cids = [p[1] for p in ps]
        if len(set(cids)) != 4:
            continue
        places = frozenset((start + k) % n2 for k in range(4))
        runs.append((places, tuple(cids), tuple(p[0] for p in ps)))
    out = set()
    for i, (pl1, c1, r1) in enumerate(runs):
        for pl2, c2, r2 in runs[i + 1:]:
            if pl1 & pl2:
                continue
            comp = tuple("O" if r == "U" else "U" for r in r2)
            if (c1 == c2 and r1 == comp) or (c1 == c2[::-1] and r1 == comp[::-1]):
                out.add(frozenset(c1))
    return out


def brute_diagonal(seq):
    """Sites for the diagonal toggles: 4-gon chains plus twist windows."""
    return chain_ngons(seq, 4) | twist_windows(seq)


def brute_sites(code, kind):
    seq = parse_simple(code)
    if kind == "R1":
        return brute_r1(seq)
    if kind == "R2":
        return brute_r2(seq)
    if kind == "GAMMA":
        return brute_gamma(seq)
    if kind == "R3":
        return brute_triangles(seq)[0]
    if kind == "DELTA":
        return brute_triangles(seq)[1]
    if kind == "X":
        return brute_x(seq)
    if kind in ("D13", "D24"):
        return brute_diagonal(seq)
    raise ValueError(kind)


# --- unmemoized Kauffman state sum ------------------------------------
# Works straight off the PD text.  The A-smoothing of X[a,b,c,d] joins
# edge a with b and edge c with d; the B-smoothing joins a with d and
# b with c.  (Pinned against the published trefoil polynomial.)

_PD_X = re.compile(r"X\[(\d+),(\d+),(\d+),(\d+)\]")


def jones_statesum(pd_text, writhe):
    """dict exponent -> coefficient of the Jones polynomial in A."""
    xs = [tuple(int(g) for g in m.groups()) for m in _PD_X.finditer(pd_text)]
    n = len(xs)
    if n == 0:
        return {0: 1}
    edges = sorted({e for x in xs for e in x})
    total = {}
    for state in itertools.product((0, 1), repeat=n):
        parent = {e: e for e in edges}

        def find(e):
            while parent[e] != e:
                parent[e] = parent[parent[e]]
                e = parent[e]
            return e

        def union(a, b):
            parent[find(a)] = find(b)

        a_count = 0
        for (a, b, c, d), s in zip(xs, state):
            if s == 0:
                a_count += 1
                union(a, b)
                union(c, d)
            else:
                union(a, d)
                union(b, c)
        loops = len({find(e) for e in edges})
        exp = a_count - (n - a_count)
        # multiply by (-A^2 - A^-2)^(loops - 1)
        term = {exp: 1}
        for _ in range(loops - 1):
            nxt = {}
            for e, c in term.items():
                nxt[e + 2] = nxt.get(e + 2, 0) - c
                nxt[e - 2] = nxt.get(e - 2, 0) - c
            term = nxt
        for e, c in term.items():
            total[e] = total.get(e, 0) + c
    # writhe normalization: multiply by (-A^3)^(-writhe)
    shifted = {}
    sign = 1 if writhe % 2 == 0 else -1
    for e, c in total.items():
        shifted[e - 3 * writhe] = sign * c
    return {e: c for e, c in shifted.items() if c}


# --- fuzz generators --------------------------------------------------


def random_welded_code(rng, max_classical=6, max_virtual=4):
    """A random welded Gauss code; any double-occurrence word is legal."""
    nc = rng.randint(1, max_classical)
    nv = rng.randint(0, max_virtual)
    symbols = list(range(1, nc + nv + 1))
    virtual = set(rng.sample(symbols, nv))
    word = [s for s in symbols for _ in (0, 1)]
    rng.shuffle(word)
    first_seen = set()
    toks = []
    role_of = {s: rng.choice("OU") for s in symbols}
    sign_of = {s: rng.choice("+-") for s in symbols}
    for s in word:
        if s in virtual:
            toks.append(f"V{s}")
            continue
        if s not in first_seen:
            first_seen.add(s)
            r = role_of[s]
        else:
            r = "U" if role_of[s] == "O" else "O"
        toks.append(f"{r}{s}{sign_of[s]}")
    return ",".join(toks)


def random_classical_code(rng, max_crossings=4):
    """A random realizable one-component classical code (rejection sampled)."""
    while True:
        n = rng.randint(1, max_crossings)
        word = [s for s in range(1, n + 1) for _ in (0, 1)]
        rng.shuffle(word)
        first_seen = set()
        toks = []
        role_of = {s: rng.choice("OU") for s in range(1, n + 1)}
        sign_of = {s: rng.choice("+-") for s in range(1, n + 1)}
        for s in word:
            if s not in first_seen:
                first_seen.add(s)
                r = role_of[s]
            else:
                r = "U" if role_of[s] == "O" else "O"
            toks.append(f"{r}{s}{sign_of[s]}")
        code = ",".join(toks)
        if brute_realizable(code):
            return code


def seeded(seed):
    return random.Random(seed)
