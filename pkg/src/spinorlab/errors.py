"""Shared exception types."""


class DomainError(ValueError):
    """Raised when an input is outside an operation's mathematical domain.

    The command line maps this to its own exit code so callers can tell a
    rejected input apart from a failed verification.
    """
