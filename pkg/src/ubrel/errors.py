"""Exception types shared by every module."""


class UbrelError(Exception):
    """Base class for all library errors."""


class UsageError(UbrelError, ValueError):
    """Caller passed mismatched dimensions, unknown names or bad arguments."""


class NumericError(UbrelError, ArithmeticError):
    """A numerical routine failed (singular matrix, series did not converge)."""


class MembershipError(UbrelError, ValueError):
    """A matrix or parameter set is not an element of the requested group.

    ``violation`` carries the largest residual of the failed condition.
    """

    def __init__(self, message, violation=float("nan")):
        super().__init__(f"{message} (max violation {violation:.3e})")
        self.violation = violation


class ConsistencyError(UbrelError):
    """An internal identity that must hold by construction was violated."""


class ClosureError(UbrelError):
    """A commutator fell outside the span of the generator basis."""


class ConvergenceError(UbrelError):
    """A contraction sweep did not decrease monotonically."""


class UnsupportedComponentError(UbrelError, ValueError):
    """Lorentz matrix outside the identity component (parity or time reversal)."""
