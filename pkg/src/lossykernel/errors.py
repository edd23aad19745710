class InputError(ValueError):
    """Raised when an operation's preconditions are violated by its input."""


class ResourceError(RuntimeError):
    """Raised when an exhaustive routine would exceed its configured work cap."""


class VerificationError(AssertionError):
    """Raised when an oracle cross-check disagrees with a computed result."""
