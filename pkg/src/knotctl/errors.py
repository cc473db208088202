"""Exception types shared across the package.

Everything domain-level derives from KnotError so CLI and callers can
catch one base class; usage errors (bad arguments to the CLI) are left to
argparse.
"""


class KnotError(Exception):
    """Base class for all domain errors."""


# --- diagram construction / traversal ---------------------------------

class DuplicatePass(KnotError):
    """A crossing id appears with the wrong multiplicity or role mix."""


class SignMismatch(KnotError):
    """The two passes of a classical crossing disagree about its sign."""


class NonRealizable(KnotError):
    """Signed Gauss data admits no planar diagram (classical mode)."""


class BadComponent(KnotError):
    """Component index out of range."""


# --- codec ------------------------------------------------------------

class LexError(KnotError):
    """Input text could not be tokenized."""


class ValidationError(KnotError):
    """Tokenized input violates a structural rule."""


class EdgeDegreeError(KnotError):
    """A PD edge label does not occur exactly twice."""


class FixtureMissing(KnotError):
    """A required fixture file is absent or unreadable."""


class OracleMismatch(KnotError):
    """A fixture's stored invariant disagrees with recomputation."""


# --- move engine ------------------------------------------------------

class MalformedRule(KnotError):
    """Rule fixture text could not be parsed into a rule."""


class BoundaryMismatch(KnotError):
    """A rule's two sides disagree about their boundary legs."""


class UnknownKind(KnotError):
    """Move kind not present in the loaded rule set."""


class StaleSite(KnotError):
    """A site/locator does not match the diagram it is applied to."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InvariantBreach(KnotError):
    """A rewrite produced a structurally invalid diagram."""


# --- realization ------------------------------------------------------

class ReplayFailure(KnotError):
    """A stored program did not replay to the expected diagram."""


class NoMarkedSite(KnotError):
    """Certification input lacks a marked target site."""


class UncertifiedKind(KnotError):
    """No conversion recipe is certified for this move kind."""


# --- invariants -------------------------------------------------------

class MultiComponent(KnotError):
    """Operation defined for knots only was handed a link."""


class WeldedMode(KnotError):
    """Operation defined for classical diagrams only (e.g. Jones)."""


# --- search -----------------------------------------------------------

class BudgetExhausted(KnotError):
    """A bounded search ran out of budget.

    Carries whatever partial result was available so callers can decide
    whether "best so far" is good enough.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class AmbiguousTarget(KnotError):
    """Fingerprints match but diagrams could not be confirmed equal."""

    def __init__(self, message, evidence=()):
        super().__init__(message)
        self.evidence = tuple(evidence)
