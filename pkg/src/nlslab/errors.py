"""Exception types shared across the package."""


class NlsLabError(Exception):
    """Base class for package errors."""


class InvalidArgumentError(NlsLabError, ValueError):
    """A precondition on an operation's arguments was violated."""


class CoverageError(InvalidArgumentError):
    """Observation data does not cover the requested time span."""


class BlowUpError(NlsLabError):
    """A non-finite value appeared during time integration."""

    def __init__(self, time: float, message: str = ""):
        self.time = time
        super().__init__(message or f"solution blew up at s = {time:.6g}")


class ConvergenceFailureError(NlsLabError):
    """An iteration failed to reach its tolerance."""

    def __init__(self, residual: float, message: str = ""):
        self.residual = residual
        super().__init__(message or f"no convergence, final residual {residual:.3e}")


class WmapNotConvergedError(ConvergenceFailureError):
    """The W-map spin-up certificate failed (windows still differ)."""

    def __init__(self, distance: float, message: str = ""):
        super().__init__(
            distance,
            message or f"W-map certificate failed: spin-up doubling moved the window by {distance:.3e}",
        )
        self.distance = distance


class BoundsOverflowError(NlsLabError):
    """A constant in the estimate chain evaluated to a non-finite value."""

    def __init__(self, constant: str):
        self.constant = constant
        super().__init__(f"non-finite value while evaluating constant {constant!r}")


class ConfigError(NlsLabError):
    """Invalid experiment configuration; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
