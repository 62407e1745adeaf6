"""Exception types shared across the package."""


class DotgateError(Exception):
    """Base class for all package-specific errors."""


class UndefinedFrameError(DotgateError):
    """Dressed frame requested at omega = delta = 0, where it is undefined."""


class CalibrationError(DotgateError):
    """Pulse-width calibration failed to converge."""


class ConfigError(DotgateError):
    """Configuration file is malformed or violates a constraint."""


class IntegrationError(DotgateError):
    """The ODE integrator failed (step-size underflow or step budget)."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class HealthViolationError(IntegrationError):
    """A sampled state broke the density-matrix health bounds."""
