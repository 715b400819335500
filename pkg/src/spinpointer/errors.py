"""Exception hierarchy shared across the package."""


class SpinPointerError(Exception):
    """Base class for all package errors."""


class SpecError(SpinPointerError, ValueError):
    """An (N, m) pair that does not define a signal family."""

    rule = "InvalidSpec"


class ParityMismatch(SpecError):
    rule = "ParityMismatch"


class OutOfRange(SpecError):
    rule = "OutOfRange"


class BadN(SpecError):
    rule = "BadN"


class NoConvergence(SpinPointerError, ArithmeticError):
    """An iterative numerical routine hit its iteration cap or failed its residual check."""


class DegenerateEigenvalue(NoConvergence):
    """The top eigenvalue is not simple, so no unique eigenvector can be returned."""


class EnvelopeBreach(SpinPointerError, RuntimeError):
    """A proposal's density exceeded the rejection envelope; rebuild with a denser grid."""
