"""Exception types shared across the package."""


class ArgumentError(ValueError):
    """A precondition on an argument was violated."""


class ValidationError(ValueError):
    """A domain or packing fails its structural invariants."""


class PackingError(RuntimeError):
    """A cube packing could not reach its volume target.

    Carries the volume actually achieved so callers can decide whether
    the partial packing is still useful.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ResourceError(RuntimeError):
    """A computation would exceed a configured resource cap."""


class SolverError(RuntimeError):
    """An iterative solver failed to converge; carries its trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []


class UnsupportedError(RuntimeError):
    """The requested (solver, domain, p) combination is out of scope."""


class EstimationError(RuntimeError):
    """An asymptotic estimate was requested on a degenerate range."""
