"""
Exception types shared across wgslab modules.
"""


class WgsLabError(Exception):
    """Base class for wgslab errors."""
    pass


class DomainError(WgsLabError, ValueError):
    """Raised when an input lies outside an operation's domain."""
    pass


class CapacityError(WgsLabError):
    """Raised when a request exceeds a dense-computation cap."""
    pass


class SaturationNotReached(CapacityError):
    """Raised when a saturation scan hits its cap before converging."""
    pass


class NoTransitionFound(WgsLabError):
    """Raised when an alpha scan shows neither a jump nor a sign change."""
    pass
