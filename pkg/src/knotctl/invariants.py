"""Diagram invariants: Alexander and Jones polynomials, Arf, linking.

Alexander comes from Fox derivatives of the Wirtinger presentation and a
fraction-free determinant, so it is exact over Z[t] and works verbatim
for welded knots (virtual crossings never break an arc).  Jones comes
from the Kauffman bracket as a memoized skein recursion and is offered
for classical diagrams only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import CLASSICAL, _mate, _rotations
from .errors import (
    BudgetExhausted,
    InvariantBreach,
    MultiComponent,
    ValidationError,
    WeldedMode,
)
from .laurent import Laurent

JONES_CROSSING_CAP = 20


# -- Alexander polynomial ----------------------------------------------


def _bareiss_det(m):
    """Exact determinant of a square matrix of Laurent polynomials."""
    n = len(m)
    if n == 0:
        return Laurent.one()
    m = [row[:] for row in m]
    flip = False
    prev = Laurent.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    flip = not flip
                    break
            else:
                return Laurent.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.divexact(prev)
            m[i][k] = Laurent.zero()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if flip else det


def _wirtinger_arcs(d):
    """Split components into arcs at classical under-passes.

    Returns (arc_of_place, under_in, under_out, arc_count): virtual and
    over passes sit inside arcs; each classical under-pass ends one arc
    and starts the next.
    """
    arc_of = {}
    under_in = {}
    under_out = {}
    nid = 0
    for ci, comp in enumerate(d.components):
        if not comp:
            continue
        upos = [pi for pi, p in enumerate(comp) if p.role == "U"]
        if not upos:
            for pi in range(len(comp)):
                arc_of[(ci, pi)] = nid
            nid += 1
            continue
        ids = {u: nid + k for k, u in enumerate(upos)}
        nid += len(upos)
        cur = ids[upos[-1]]  # arc that starts after the last under-pass
        for step in range(len(comp)):
            pi = (upos[-1] + 1 + step) % len(comp)
            arc_of[(ci, pi)] = cur
            if pi in ids:
                under_in[(ci, pi)] = cur
                cur = ids[pi]
                under_out[(ci, pi)] = cur
    return arc_of, under_in, under_out, nid


def alexander(d):
    """Normalized Alexander polynomial of a one-component diagram.

    Lowest exponent 0, positive leading coefficient.  Raises
    MultiComponent for links.
    """
    if len(d.components) != 1:
        raise MultiComponent("Alexander polynomial here is for knots only")
    cids = d.classical_ids()
    if not cids:
        return Laurent.one()
    arc_of, under_in, under_out, narcs = _wirtinger_arcs(d)
    t = Laurent.term(1, 1)
    one = Laurent.one()
    rows = []
    for cid in cids:
        po, pu = d._ordered_places(cid)
        row = [Laurent.zero() for _ in range(narcs)]
        o, a, b = arc_of[po], under_in[pu], under_out[pu]
        if d.signs[cid] > 0:
            row[o] += one - t
            row[a] += t
            row[b] += -one
        else:
            # the sign-negative Fox row times t, keeping entries in Z[t]
            row[o] += t - one
            row[a] += one
            row[b] += -t
        rows.append(row)
    minor = [row[:-1] for row in rows[:-1]]
    det = _bareiss_det(minor).normalized()
    if d.mode == CLASSICAL and abs(det.evaluate(1)) != 1:
        raise InvariantBreach("Alexander polynomial failed the det(1) = ±1 check")
    return det


def arf(d):
    """Arf invariant of a classical knot: Alexander at -1 mod 8."""
    if d.mode != CLASSICAL:
        raise WeldedMode("Arf is computed for classical knots only")
    if len(d.components) != 1:
        raise MultiComponent("Arf invariant is for knots only")
    e = alexander(d).evaluate(-1) % 8
    return 0 if e in (1, 7) else 1


# -- Kauffman bracket and Jones ----------------------------------------


def kauffman_bracket(d):
    """Bracket polynomial in A, with a single loop normalized to 1."""
    if d.mode != CLASSICAL:
        raise WeldedMode("the bracket skein is defined on classical diagrams")
    if not d.components:
        raise ValidationError("empty diagram has no bracket")
    cids = d.classical_ids()
    if len(cids) > JONES_CROSSING_CAP:
        raise BudgetExhausted(
            f"bracket computation capped at {JONES_CROSSING_CAP} crossings"
        )
    rot = _rotations(d)
    a_poly = Laurent.term(1, 1, "A")
    a_inv = Laurent.term(1, -1, "A")
    dd = Laurent({2: -1, -2: -1}, "A")  # loop value -A^2 - A^-2
    free = sum(1 for comp in d.components if not comp)

    # initial wiring: every crossing end is matched with its arc partner
    init = {}
    for ci, comp in enumerate(d.components):
        for pi in range(len(comp)):
            end = ("o", (ci, pi))
            other = _mate(d, end)
            init[end] = other
            init[other] = end

    order = cids
    memo = {}

    def resolve(idx, match):
        if idx == len(order):
            return Laurent.one("A")
        key = (idx, frozenset(frozenset(p) for p in match.items()))
        hit = memo.get(key)
        if hit is not None:
            return hit
        r0, r1, r2, r3 = rot[order[idx]]
        total = Laurent.zero("A")
        for weight, pairs in ((a_poly, ((r0, r3), (r1, r2))),
                              (a_inv, ((r0, r1), (r2, r3)))):
            m = dict(match)
            loops = 0
            for p, q in pairs:
                x, y = m.pop(p), m.pop(q)
                if x == q:
                    loops += 1
                else:
                    m[x], m[y] = y, x
            total = total + weight * dd**loops * resolve(idx + 1, m)
        memo[key] = total
        return total

    total = resolve(0, init) * dd**free
    if not cids and free:
        return dd ** (free - 1)
    return total.divexact(dd)


def jones(d):
    """Kauffman-normalized Jones polynomial in the bracket variable A.

    (-A^3)^(-writhe) times the bracket; substitute t = A^-4 for the
    t-variable form.
    """
    br = kauffman_bracket(d)
    w = d.writhe()
    return br * Laurent.term((-1) ** (w % 2), -3 * w, "A")


def linking_number(d, a=None, b=None):
    """Half the signed count of classical crossings between two components.

    With no arguments, sums over all unordered component pairs.
    """
    ncomp = len(d.components)
    if a is None and b is None:
        pairs = None
    else:
        if not (isinstance(a, int) and isinstance(b, int)):
            raise ValidationError("give both component indices or neither")
        for x in (a, b):
            if not 0 <= x < ncomp:
                from .errors import BadComponent

                raise BadComponent(f"component {x} out of range")
        if a == b:
            raise ValidationError("linking number needs two distinct components")
        pairs = frozenset((a, b))
    total = 0
    for cid, places in d.occurrences.items():
        if cid not in d.signs:
            continue
        c1, c2 = places[0][0], places[1][0]
        if c1 == c2:
            continue
        if pairs is not None and frozenset((c1, c2)) != pairs:
            continue
        total += d.signs[cid]
    if total % 2:
        raise InvariantBreach("inter-component sign sum came out odd")
    return total // 2


# -- Combined fingerprint ----------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    """Cheap identity evidence for a knot: invariants plus best size found.

    Equal knots get equal fingerprints; distinct knots usually differ
    but are not guaranteed to (this is not a complete recognizer).
    Welded diagrams carry Alexander only; jones and arf are None there.
    """

    alexander: Laurent
    jones: Laurent | None
    arf: int | None
    crossings: int

    def text(self):
        jt = "-" if self.jones is None else self.jones.text()
        at = "-" if self.arf is None else str(self.arf)
        return f"alexander={self.alexander.text()} jones={jt} arf={at} crossings={self.crossings}"


def fingerprint(d, crossings=None):
    """Bundle the invariants of a knot with its best simplified size.

    ``crossings`` lets a caller that has already simplified the diagram
    pass the count in; otherwise the descending-style simplifier runs
    here.  Raises MultiComponent for links.
    """
    if len(d.components) != 1:
        raise MultiComponent("fingerprints are for knots only")
    if crossings is None:
        from .unknot import simplify

        crossings = len(simplify(d)[0].classical_ids())
    alex = alexander(d)
    if d.mode == CLASSICAL and len(d.classical_ids()) <= JONES_CROSSING_CAP:
        jo = jones(d)
        ar = arf(d)
    else:
        jo = None
        ar = None
    return Fingerprint(alex, jo, ar, crossings)
