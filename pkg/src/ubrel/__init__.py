"""Heisenberg automorphisms and the noninertial relativity group Ub(1,n)."""
from .errors import (
    ClosureError,
    ConsistencyError,
    ConvergenceError,
    MembershipError,
    NumericError,
    UbrelError,
    UnsupportedComponentError,
    UsageError,
)
from .matrix_core import DEFAULT_TOL, Tolerance

__version__ = "0.1.0"
