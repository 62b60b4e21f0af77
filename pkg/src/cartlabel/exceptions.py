"""Exception hierarchy shared by every module."""


class CartLabelError(Exception):
    """Base class for all errors raised by this package."""


class SizeBudgetError(CartLabelError):
    """A full product would exceed the configured vertex budget."""


class ValidationError(CartLabelError, ValueError):
    """Malformed graph or product instance (bad edge, duplicate tuple, ...)."""


class ClassMembershipError(ValidationError):
    """A factor graph does not belong to the class handled by a base scheme."""


class BuildError(CartLabelError, RuntimeError):
    """A randomized construction ran out of retries."""

    def __init__(self, message, attempts=0, failures=0):
        super().__init__(message)
        self.attempts = attempts
        self.failures = failures


class FormatError(CartLabelError, ValueError):
    """Bad serialized data: wrong length, truncated stream, unparsable file."""


class UndecodableXorError(CartLabelError):
    """An XOR of lifted labels is not the image of any pair of known labels."""
