"""Command-line front end.

One subcommand per library area: parse/validate/invariant for codecs
and invariants, sites/apply for the move engine, unknot for the
untangling pipeline, certify for macro realization certificates,
distance for move-distance bounds, table for the bundled knot list.

Exit status: 0 success, 1 domain errors (unrealizable codes, failed
searches, false certificates), 2 usage errors.
"""

import argparse
import json
import random
import sys

from .codec import check_realizable, emit_pd, load_table, parse_gauss, parse_pd
from .diagram import CLASSICAL, WELDED
from .errors import KnotError, MultiComponent, ValidationError, WeldedMode
from .invariants import alexander, arf, fingerprint, jones, linking_number
from .moves import apply_move, find_sites, parse_program
from .realize import CERTIFIED_KINDS, certify_all, expand_macro
from .distance import distance_bound, relation_report, unknotting_bound
from .unknot import unknot


class _Usage(Exception):
    pass


# -- input plumbing -----------------------------------------------------


def _add_input(p):
    p.add_argument("name", nargs="?", metavar="NAME",
                   help="table knot name such as 5_1")
    p.add_argument("--gauss", help="inline Gauss code")
    p.add_argument("--pd", help="inline PD code")
    p.add_argument("--in", dest="infile", metavar="FILE",
                   help="file with a Gauss or PD code; - reads stdin")


def _add_common(p):
    p.add_argument("--mode", choices=(CLASSICAL, WELDED), default=CLASSICAL)
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--seed", type=int, default=None,
                   help="fix random sampling for reproducible output")


def _load(args):
    sources = [s for s in (args.name, args.gauss, args.pd, args.infile)
               if s is not None]
    if len(sources) != 1:
        raise _Usage("give exactly one of NAME, --gauss, --pd, --in")
    if args.name is not None:
        entry = load_table().get(args.name)
        if entry is None:
            raise ValidationError(f"no table knot named {args.name!r}")
        return parse_gauss(entry.gauss, mode=args.mode)
    if args.gauss is not None:
        return parse_gauss(args.gauss, mode=args.mode)
    if args.pd is not None:
        return parse_pd(args.pd, mode=args.mode)
    text = (sys.stdin.read() if args.infile == "-"
            else open(args.infile).read()).strip()
    if text.startswith("X["):
        return parse_pd(text, mode=args.mode)
    return parse_gauss(text, mode=args.mode)


def _emit(args, text, payload):
    if args.format == "structured":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# -- subcommands --------------------------------------------------------


def _cmd_parse(args):
    d = _load(args)
    payload = {
        "gauss": d.gauss_text(),
        "canonical": d.canonical_text(),
        "pd": emit_pd(d) if d.mode == CLASSICAL else None,
        "mode": d.mode,
        "components": len(d.components),
        "classical_crossings": len(d.classical_ids()),
        "virtual_crossings": len(d.virtual_ids()),
        "writhe": d.writhe(),
    }
    _emit(args, d.canonical_text(), payload)
    return 0


def _cmd_validate(args):
    try:
        d = _load(args)
        if d.mode == CLASSICAL:
            check_realizable(d)
    except KnotError as e:
        _emit(args, f"invalid: {type(e).__name__}: {e}",
              {"valid": False, "error": type(e).__name__, "detail": str(e)})
        return 1
    _emit(args, "ok",
          {"valid": True, "mode": d.mode, "components": len(d.components)})
    return 0


def _cmd_invariant(args):
    d = _load(args)
    lines = []
    payload = {"mode": d.mode, "components": len(d.components)}
    if len(d.components) == 1:
        a = alexander(d)
        lines.append(f"alexander  {a.text()}")
        payload["alexander"] = a.text()
        try:
            j = jones(d)
            lines.append(f"jones      {j.text()}")
            payload["jones"] = j.text()
            payload["arf"] = arf(d)
            lines.append(f"arf        {payload['arf']}")
        except (WeldedMode, KnotError) as e:
            lines.append(f"jones      skipped ({type(e).__name__})")
            payload["jones"] = None
        fp = fingerprint(d)
        lines.append(f"fingerprint {fp.text()}")
        payload["fingerprint"] = fp.text()
    else:
        lk = linking_number(d)
        lines.append(f"linking    {lk}")
        payload["linking"] = lk
    _emit(args, "\n".join(lines), payload)
    return 0


def _cmd_sites(args):
    d = _load(args)
    if args.kind:
        sites = find_sites(d, args.kind.upper(), direction=args.direction)
        text = "\n".join(s.text() for s in sites) or "(none)"
        _emit(args, text, {"kind": args.kind.upper(),
                           "direction": args.direction,
                           "sites": [s.text() for s in sites]})
        return 0
    kinds = ["R1", "R2", "R3", "X", "GAMMA", "DELTA", "D13", "D24",
             "SHARP", "SHARPBAR", "PASS", "FOUR"]
    if d.mode == WELDED:
        kinds += ["V1", "V2", "V3", "MIXED", "OC"]
    counts = {k: len(find_sites(d, k)) for k in kinds}
    text = "\n".join(f"{k:8} {n}" for k, n in counts.items() if n)
    _emit(args, text or "(none)", {"counts": counts})
    return 0


def _cmd_apply(args):
    d = _load(args)
    if args.program:
        steps = parse_program(args.program.replace(";", "\n"))
    elif args.kind:
        kind = args.kind.upper()
        if args.at:
            steps = parse_program(f"{kind} {args.at}")
        else:
            sites = find_sites(d, kind, direction=args.direction)
            if not sites:
                raise ValidationError(f"no {kind} site on this diagram")
            steps = [sites[0]]
    else:
        raise _Usage("apply needs --kind or --program")
    cur = d
    applied = []
    for s in steps:
        cur = apply_move(cur, s)
        applied.append(s.text())
    _emit(args, cur.gauss_text(),
          {"applied": applied, "result": cur.gauss_text(),
           "canonical": cur.canonical_text()})
    return 0


def _cmd_unknot(args):
    d = _load(args)
    rep = unknot(d, budget=args.budget, style=(args.kind or "D").upper(),
                 sweep=args.sweep_basepoints)
    _emit(args, rep.text(), rep.as_dict())
    return 0 if rep.trivial else 1


def _cmd_certify(args):
    if args.all:
        certs = certify_all()
    elif args.kind:
        certs = [expand_macro(args.kind.upper(), host=args.host)]
    else:
        raise _Usage("certify needs a move kind or --all")
    text = "\n\n".join(c.text() for c in certs)
    payload = [{
        "kind": c.kind, "mode": c.mode, "context": c.context,
        "target": c.target.text(), "steps": [s.text() for s in c.steps],
        "d_count": c.d_count, "verdict": c.verdict,
    } for c in certs]
    _emit(args, text, payload)
    return 0 if all(c.verdict for c in certs) else 1


def _knot_arg(s, mode):
    """A table name stays a name (distance uses it for table evidence)."""
    if s in load_table():
        return s
    return parse_gauss(s, mode=mode)


def _cmd_distance(args):
    src = _knot_arg(args.source, args.mode)
    tgt = None if args.target in (None, "unknot") else _knot_arg(
        args.target, args.mode)
    if args.kind:
        srcd = load_table()[src].diagram() if isinstance(src, str) else src
        tgtd = load_table()[tgt].diagram() if isinstance(tgt, str) else tgt
        if tgtd is None:
            b = unknotting_bound(srcd, args.kind.upper(), budget=args.budget,
                                 sweep=args.sweep_basepoints)
        else:
            b = distance_bound(srcd, tgtd, args.kind.upper(),
                               budget=args.budget,
                               sweep=args.sweep_basepoints)
        lines = [b.text()] + ["  " + s.text() for s in b.witness]
        _emit(args, "\n".join(lines), b.as_dict())
        return 0
    rep = relation_report(src, tgt, budget=args.budget,
                          sweep=args.sweep_basepoints)
    _emit(args, rep.text(), rep.as_dict())
    return 0


def _cmd_table(args):
    table = load_table()
    if args.name:
        e = table.get(args.name)
        if e is None:
            raise ValidationError(f"no table knot named {args.name!r}")
        lines = [f"name      {e.name}",
                 f"gauss     {e.gauss}",
                 f"alexander {e.alexander.text()}"]
        if e.unknotting is not None:
            lines.append(f"u         {e.unknotting}")
        _emit(args, "\n".join(lines),
              {"name": e.name, "gauss": e.gauss,
               "alexander": e.alexander.text(), "u": e.unknotting})
        return 0
    lines = []
    payload = []
    for name, e in table.items():
        n = len(parse_gauss(e.gauss).classical_ids())
        u = "-" if e.unknotting is None else e.unknotting
        lines.append(f"{name:6} {n:2} crossings  u={u}")
        payload.append({"name": name, "crossings": n, "u": e.unknotting})
    _emit(args, "\n".join(lines), payload)
    return 0


# -- wiring -------------------------------------------------------------


def _parser():
    top = argparse.ArgumentParser(
        prog="knotctl",
        description="Knot diagram codecs, moves, invariants, "
                    "untangling, certificates, and distance bounds.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="normalize a diagram code")
    _add_input(p); _add_common(p)
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("validate", help="check a code parses and embeds")
    _add_input(p); _add_common(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("invariant", help="polynomials, arf, linking")
    _add_input(p); _add_common(p)
    p.set_defaults(fn=_cmd_invariant)

    p = sub.add_parser("sites", help="list applicable move sites")
    _add_input(p); _add_common(p)
    p.add_argument("--kind", help="move kind, e.g. R2 or D13")
    p.add_argument("--direction", choices=("reduce", "insert"),
                   default="reduce")
    p.set_defaults(fn=_cmd_sites)

    p = sub.add_parser("apply", help="apply a move or replay a program")
    _add_input(p); _add_common(p)
    p.add_argument("--kind", help="move kind; first site unless --at is given")
    p.add_argument("--at", help="locator for --kind")
    p.add_argument("--direction", choices=("reduce", "insert"),
                   default="reduce")
    p.add_argument("--program", help="semicolon- or newline-separated steps")
    p.set_defaults(fn=_cmd_apply)

    p = sub.add_parser("unknot", help="simplify, toggle descending, simplify")
    _add_input(p); _add_common(p)
    p.add_argument("--kind", choices=("D", "X", "d", "x"),
                   help="toggle style (default D)")
    p.add_argument("--budget", type=int, default=100000)
    p.add_argument("--sweep-basepoints", action="store_true")
    p.set_defaults(fn=_cmd_unknot)

    p = sub.add_parser("certify", help="realization certificates")
    _add_common(p)
    p.add_argument("kind", nargs="?", metavar="KIND",
                   help="one of " + ", ".join(CERTIFIED_KINDS)
                        + ", or NGON<n>")
    p.add_argument("--all", action="store_true",
                   help="emit the full certificate set")
    p.add_argument("--host", action="store_true",
                   help="use the embedded-context fixture")
    p.set_defaults(fn=_cmd_certify)

    p = sub.add_parser("distance", help="move-distance upper bounds")
    _add_common(p)
    p.add_argument("--from", dest="source", required=True,
                   help="table name or Gauss code")
    p.add_argument("--to", dest="target", default=None,
                   help="table name or Gauss code; default unknot")
    p.add_argument("--kind", help="one move family; omit for a full report")
    p.add_argument("--budget", type=int, default=100000)
    p.add_argument("--sweep-basepoints", action="store_true")
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("table", help="bundled knot table")
    _add_common(p)
    p.add_argument("name", nargs="?", metavar="NAME")
    p.set_defaults(fn=_cmd_table)

    return top


def main(argv=None):
    args = _parser().parse_args(argv)
    if getattr(args, "seed", None) is not None:
        random.seed(args.seed)
    try:
        return args.fn(args)
    except _Usage as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0
    except KnotError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
