"""Exception hierarchy.

Every error raised by the library derives from :class:`CarcassError`.  The
three intermediate classes map onto the command-line exit codes: validation
problems (2), resource caps (3) and broken internal invariants (4).
"""


class CarcassError(Exception):
    """Base class for all library errors."""


class ValidationError(CarcassError, ValueError):
    """Input does not satisfy an operation's precondition."""


class DomainError(ValidationError):
    """A point lies outside [0, 1]."""


class NotHomeomorphismError(ValidationError):
    """A map expected to be an increasing homeomorphism of [0, 1] is not."""


class FlatSegmentError(ValidationError):
    """A constant segment makes a preimage infinite."""


class ShapeError(ValidationError):
    """A map violates one clause of the unimodal (carcass) shape."""


class LatticeIndexError(ValidationError, IndexError):
    """Level or interval index outside the computed lattice."""


class DepthError(ValidationError):
    """Not enough lattice levels for the requested computation."""


class PreconditionError(ValidationError):
    """An operation-specific precondition fails."""


class ParseError(ValidationError):
    """Malformed map document."""


class ResourceError(CarcassError):
    """A configured cap (lattice points, denominator bits) was exceeded."""


class InvariantError(CarcassError, AssertionError):
    """An internal invariant broke; indicates a bug or a bad input that slipped through."""
