"""Exception types shared across the package."""


class OrbflError(Exception):
    """Base class for all package-specific errors."""


class InsufficientPrecisionError(OrbflError):
    """A result could not be certified at the working precision."""


class DegenerateInputError(OrbflError):
    """Input violates a structural precondition (non-generator, zero divisor, ...)."""


class RelationError(OrbflError):
    """A required algebraic relation failed to hold.

    Carries the name of the violated relation in args[0].
    """


class GuardError(OrbflError):
    """An enumeration exceeded its configured guard bound."""


class UnsupportedError(OrbflError):
    """Requested feature lies outside the implemented parameter range."""
