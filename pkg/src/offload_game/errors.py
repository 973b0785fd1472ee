"""Exception types shared across the package."""


class OffloadGameError(Exception):
    """Base class for all package-specific errors."""


class InstanceTooLarge(OffloadGameError):
    """Raised when an exhaustive computation would exceed its safety cap."""


class BoundInapplicable(OffloadGameError):
    """Raised when an analytic bound's preconditions do not hold."""


class ContentionUnsupported(OffloadGameError):
    """Raised for quantities that are only defined under the interference model."""


class SchemaError(OffloadGameError):
    """Raised on malformed scenario/report documents; message names the field path."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")
