"""Exception types raised by the toolkit.

Every error that stems from a failed numerical predicate carries the
offending residual so callers can decide whether to tighten tolerances
or reject the input.
"""


class KCayleyError(Exception):
    """Base class for all toolkit errors."""

    def __init__(self, message, residual=None, **context):
        if residual is not None:
            message = f"{message} (residual={residual:.3e})"
        if context:
            extras = ", ".join(f"{k}={v}" for k, v in context.items())
            message = f"{message} [{extras}]"
        super().__init__(message)
        self.residual = residual
        self.context = context


class StructuralError(KCayleyError):
    """An input violates a structural predicate (hermiticity, unitarity, ...)."""


class ParityError(KCayleyError):
    """An operator is not homogeneous with respect to the relevant grading."""


class SingularityError(KCayleyError):
    """An eigenvalue sits too close to a declared singularity of a scalar function."""


class ConditioningError(KCayleyError):
    """A matrix is too close to singular for the requested operation."""


class PreconditionError(KCayleyError):
    """A documented operation precondition is violated."""


class CompositionError(KCayleyError):
    """Operands have incompatible shapes, gradings or real structures."""


class CapacityError(KCayleyError):
    """A dimension guard was exceeded."""


class GaplessError(KCayleyError):
    """A Hamiltonian has spectrum inside the required gap."""


class RefinementError(KCayleyError):
    """A grid is too coarse to resolve a crossing or phase increment."""


class InconsistencyError(KCayleyError):
    """Two independent computations of the same integer disagree."""
