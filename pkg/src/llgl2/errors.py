"""Error types shared across the package.

The CLI maps these onto exit codes: InvalidInput -> 1, MathDomainError
(and subclasses) -> 2, CheckFailed -> 3.
"""


class InvalidInput(ValueError):
    """Malformed or unparsable input data."""


class MathDomainError(ValueError):
    """A mathematical precondition of an operation is violated."""


class UnsupportedWeight(MathDomainError):
    pass


class PoleAtPoint(MathDomainError):
    pass


class LevelTooSmall(MathDomainError):
    pass


class NotAMonodromyRep(MathDomainError):
    pass


class InconsistentInput(MathDomainError):
    pass


class UnsupportedCoefficients(MathDomainError):
    pass


class NotApplicable(MathDomainError):
    pass


class CheckFailed(AssertionError):
    """A verification run found a genuine mismatch."""
