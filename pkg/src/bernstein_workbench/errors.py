"""Exception hierarchy shared by all modules."""


class WorkbenchError(Exception):
    """Base class for all library errors."""


class DomainError(WorkbenchError):
    """An argument lies outside the documented domain of an operation."""


class CapacityError(WorkbenchError):
    """The request exceeds a configured size budget (e.g. exact mode for
    very large n).  Callers are expected to switch to float mode."""


class NotRegulatedError(WorkbenchError):
    """A one-sided limit was requested for a function that has none."""


class ConstructionError(WorkbenchError):
    """Constructor arguments violate a type invariant."""


class NeedsBreakpointsError(WorkbenchError):
    """An exact variation is required but only a lower bound is known."""


class InternalCheckError(WorkbenchError):
    """A certified internal bound failed; indicates a bug, not bad input."""


class InconclusiveTrajectory(WorkbenchError):
    """A schedule ended before the trajectory settled."""


class SelectionInconclusive(WorkbenchError):
    """Subsequence selection ran out of candidates before reaching the
    requested tolerance.  Carries the best-effort indices."""

    def __init__(self, message, indices):
        super().__init__(message)
        self.indices = list(indices)
