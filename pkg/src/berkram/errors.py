"""Exception hierarchy shared by all modules.

Every error that reflects a mathematical limitation of the computable
field models (rather than a bug) derives from BerkramError so callers
can distinguish "the instance left the supported subfield" from
programming mistakes.
"""


class BerkramError(Exception):
    """Base class for all library errors."""


class ZeroWithinPrecision(BerkramError):
    """A series has no visible term but is not certified zero.

    Equality of truncated series is only semidecidable; operations that
    need a certified nonzero (division, ord, leading residue) raise this
    instead of guessing.
    """


class NegativeValuation(BerkramError):
    """Residue requested for an element outside the valuation ring."""


class UnsupportedExtension(BerkramError):
    """The computation needs a field element outside the active model.

    Raised e.g. when a residue root is irrational over the rationals, or
    when a Puiseux expansion needs an exponent denominator beyond the
    configured ramification budget.  Callers must surface this, never
    guess a value.
    """


class TypeIIIUnsupported(BerkramError):
    """A reduction-based operation was asked at a point whose radius
    exponent lies outside the value group of the active tower."""


class OracleInconclusive(BerkramError):
    """Independent root-count oracle could not certify a local degree.

    Signals the probe point sits on a breakpoint or the sample targets
    were non-generic; the caller perturbs the radius and retries.
    """


class NoStabilization(BerkramError):
    """Two-sided probes around a type III point failed to agree within
    the configured budget (indicates precision failure)."""


class PrecisionExhausted(BerkramError):
    """A Newton polygon or expansion needed coefficients beyond the
    working precision cap."""


class ResidueFieldTooSmall(BerkramError):
    """The construction needs more distinct residues than the residue
    field provides."""


class MapSyntaxError(BerkramError):
    """Positional syntax error in the expression grammar."""

    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos


class SemanticError(BerkramError):
    """Well-formed input that is invalid in the active field mode."""
