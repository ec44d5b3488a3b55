"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A requested size exceeds a configured computation cap."""


class MatchingParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(ValueError):
    """An operation was requested in a coefficient domain that does not support it."""


class ConventionError(RuntimeError):
    """Calibration could not single out a convention."""


class VerificationError(RuntimeError):
    """An exact identity that must hold was found to fail."""
