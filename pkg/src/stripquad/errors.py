"""Exception types shared across the package."""


class StripQuadError(Exception):
    """Base class for all package errors."""


class InvalidParameter(StripQuadError):
    """A parameter violates a positivity, ordering, or range constraint."""


class InvalidInterval(StripQuadError):
    """Integration interval is empty, reversed, or non-finite."""


class PanelLimitExceeded(StripQuadError):
    """Adaptive integrator ran out of panels before meeting the tolerance."""


class BracketViolation(StripQuadError):
    """Root refinement could not converge inside its bracket."""


class NonexistentWeight(StripQuadError):
    """Double-exponential decay too fast for the strip: no such weight exists."""


class PreconditionNotMet(StripQuadError):
    """A bound formula was requested outside its proven parameter range."""


class Overflow(StripQuadError):
    """A computed quantity exceeds the largest finite double."""


class InsufficientData(StripQuadError):
    """Not enough sweep records to fit a rate."""


class DegenerateAbscissa(StripQuadError):
    """Rate-model abscissa has zero variance over the records."""
