"""Exception types raised by the toolkit."""


class RisError(Exception):
    """Base class for toolkit errors."""


class DomainError(RisError, ValueError):
    """Argument outside the domain of a function."""


class InadmissiblePatternError(RisError, ValueError):
    """Coupling matrix violates passivity (eigenvalue above one)."""


class ConfigurationError(RisError, ValueError):
    """Invalid load or route configuration."""


class RouteConflictError(ConfigurationError):
    """Redirective routes touch the same beam port."""

    def __init__(self, ports):
        self.ports = sorted(ports)
        super().__init__(f"routes overlap on beam ports {self.ports}")


class InstabilityError(RisError, ArithmeticError):
    """Load and array form an unstable (oscillating) loop."""


class UnderdeterminedError(RisError, ValueError):
    """Probe schedule has too few independent rows for recovery."""
