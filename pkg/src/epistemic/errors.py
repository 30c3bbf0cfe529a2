"""Exception types shared across the package."""


class EpistemicError(Exception):
    """Base class for all errors raised by this package."""


class InputError(EpistemicError, ValueError):
    """Malformed arguments: unknown states or agents, empty groups, bad tokens."""


class PreconditionError(EpistemicError):
    """An operation was called on a structure of the wrong class."""


class NotFoundError(EpistemicError, LookupError):
    """A requested counterfactual state label does not exist."""


class ResourceLimitError(EpistemicError):
    """A configured cap (cell count, enumeration size) would be exceeded."""


class DomainError(EpistemicError):
    """A decision function was asked about an event outside its domain."""

    def __init__(self, message: str, event: frozenset[str] | None = None):
        super().__init__(message)
        self.event = event


class ParseError(EpistemicError, ValueError):
    """A document could not be parsed or failed validation."""
