"""Link-diagram toolkit: codecs, moves, invariants, untangling, distances.

The working object is a LinkDiagram built from signed Gauss codes (or
PD codes).  On top of it sit a rule-driven move engine, an untangling
pipeline built on diagonal toggles, exact polynomial invariants,
replayable realization certificates for the composite moves, and
witness-certified move-distance bounds.
"""

from .codec import (
    TableEntry,
    check_realizable,
    emit_gauss,
    emit_pd,
    fixture_path,
    load_table,
    parse_gauss,
    parse_pd,
)
from .diagram import CLASSICAL, WELDED, LinkDiagram, build_diagram
from .distance import (
    Bound,
    DistanceReport,
    distance_bound,
    relation_report,
    unknotting_bound,
)
from .errors import KnotError
from .invariants import (
    Fingerprint,
    alexander,
    arf,
    fingerprint,
    jones,
    kauffman_bracket,
    linking_number,
)
from .laurent import Laurent
from .moves import Site, Step, apply_move, apply_program, find_sites, parse_program
from .realize import (
    RealizationCertificate,
    certify_all,
    certify_program,
    convert_d_to_x,
    convert_to_d,
    count_d,
    expand_macro,
    lasso_program,
    macro_program,
)
from .rules import load_rules
from .unknot import (
    UnknotReport,
    descending_change_set,
    descending_program,
    is_descending,
    is_untangled,
    simplify,
    unknot,
)

__version__ = "0.1.0"

__all__ = [
    "Bound",
    "CLASSICAL",
    "DistanceReport",
    "Fingerprint",
    "KnotError",
    "Laurent",
    "LinkDiagram",
    "RealizationCertificate",
    "Site",
    "Step",
    "TableEntry",
    "UnknotReport",
    "WELDED",
    "alexander",
    "apply_move",
    "apply_program",
    "arf",
    "build_diagram",
    "certify_all",
    "certify_program",
    "check_realizable",
    "convert_d_to_x",
    "convert_to_d",
    "count_d",
    "descending_change_set",
    "descending_program",
    "distance_bound",
    "emit_gauss",
    "emit_pd",
    "expand_macro",
    "find_sites",
    "fingerprint",
    "fixture_path",
    "is_descending",
    "is_untangled",
    "jones",
    "kauffman_bracket",
    "lasso_program",
    "linking_number",
    "load_rules",
    "load_table",
    "macro_program",
    "parse_gauss",
    "parse_pd",
    "parse_program",
    "relation_report",
    "simplify",
    "unknot",
    "unknotting_bound",
]
