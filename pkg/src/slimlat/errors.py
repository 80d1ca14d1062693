"""Exception types shared across the package."""


class SlimlatError(Exception):
    pass


class OrderError(SlimlatError):
    """Structurally invalid poset or lattice."""


class DiagramError(SlimlatError):
    """Planar diagram cannot be built or is corrupt."""


class PreconditionError(SlimlatError):
    """An operation's stated precondition does not hold."""


class ParseError(SlimlatError):
    """DSL or file format error, with position information."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class BudgetError(SlimlatError):
    """A search or enumeration exceeded its configured budget."""


class InternalInconsistencyError(SlimlatError):
    """A guaranteed invariant failed; indicates a bug, not bad input."""
