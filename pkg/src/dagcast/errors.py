"""Exception hierarchy shared across the package."""


class DagcastError(Exception):
    """Base class for all package errors."""


class StructuralError(DagcastError):
    """The network description itself is malformed (bad ids, self-loops, ...)."""


class DomainError(DagcastError):
    """An operation was called outside its domain (cyclic graph, bad rate, ...)."""


class ResourceLimitError(DagcastError):
    """An enumeration or search exceeded its configured size cap."""

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class InvariantViolation(DagcastError):
    """A runtime trace violated an invariant that should hold by construction.

    Raised by the policy engines; signals a forwarding bug, not bad input.
    """
