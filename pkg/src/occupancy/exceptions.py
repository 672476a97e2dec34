class OccupancyError(Exception):
    """Base class for errors raised by this package."""


class ArgumentError(OccupancyError, ValueError):
    """An argument is outside its admissible domain."""


class ValidationError(OccupancyError, ValueError):
    """Input data violates a structural requirement (self-loop, isolated vertex, ...)."""


class GraphParseError(ValidationError):
    """Malformed edge-list document; the message carries the line number."""


class CapacityError(OccupancyError, RuntimeError):
    """A computation would exceed a configured size or enumeration budget."""
