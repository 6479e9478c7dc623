"""Exception types shared across the package."""


class FlexicolorError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(FlexicolorError):
    """An operation was called on input outside its contract."""


class DisconnectedGraphError(PreconditionError):
    """Raised where a connected graph is required; names two components."""

    def __init__(self, comp_a, comp_b):
        self.comp_a = tuple(sorted(comp_a))
        self.comp_b = tuple(sorted(comp_b))
        super().__init__(
            f"graph is disconnected: component containing {self.comp_a[0]} "
            f"({self.comp_a}) is separate from component containing "
            f"{self.comp_b[0]} ({self.comp_b})"
        )


class BudgetExceededError(FlexicolorError):
    """An exhaustive computation would exceed its configured budget."""


class InternalInvariantError(FlexicolorError):
    """A certified guarantee failed at runtime.

    This never indicates bad input: it means either a bug in this package
    or a violated precondition that slipped past validation, and it must
    abort loudly rather than degrade.
    """


class FormatError(FlexicolorError):
    """Malformed instance or result document."""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
