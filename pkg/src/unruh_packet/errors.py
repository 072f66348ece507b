"""Exception types shared across the package."""


class SingularInputError(ValueError):
    """Raised when a quantity is requested exactly at a removable or true singularity."""


class AccuracyError(RuntimeError):
    """A numerical routine could not meet its accuracy target.

    The best available estimate is attached as ``partial`` so callers can
    record it instead of discarding the work.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
