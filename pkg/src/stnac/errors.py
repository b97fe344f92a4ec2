"""Exception types shared across the package."""


class StnacError(Exception):
    """Base class for all package-specific errors."""


class BoundOverflowError(StnacError, OverflowError):
    """Finite interval arithmetic left the 64-bit range."""


class FormatError(StnacError, ValueError):
    """Malformed instance file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(StnacError, ValueError):
    """Model invariant violated: bad index, self loop, infinite domain, ..."""


class GenerationError(StnacError, ValueError):
    """Workload generator parameters out of range or unsatisfiable."""


class ProtocolError(StnacError, RuntimeError):
    """An agent received a message its phase cannot accept.

    Must never fire on valid runs; the message includes a state dump.
    """


class DeadlockError(StnacError, RuntimeError):
    """All agents blocked with no messages in flight."""

    def __init__(self, snapshot):
        self.snapshot = snapshot
        super().__init__(f"simulation deadlock; blocked agents: {snapshot}")


class RunawayError(StnacError, RuntimeError):
    """Simulation exceeded its step budget."""
