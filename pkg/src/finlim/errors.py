"""Exception types shared across the package."""


class FinlimError(Exception):
    """Base class for every error raised by finlim."""


class DiagramError(FinlimError, ValueError):
    """A diagram, cone or morphism is malformed or mistyped."""


class BudgetExceeded(FinlimError, RuntimeError):
    """An exhaustive computation would exceed its enumeration budget."""


class BoundExceeded(FinlimError, ValueError):
    """An argument is outside the range an enumeration supports."""


class NoFactorization(FinlimError, ValueError):
    """A cone does not factor through the given limit."""


class VerificationError(FinlimError, AssertionError):
    """An internally asserted identity failed to hold."""
