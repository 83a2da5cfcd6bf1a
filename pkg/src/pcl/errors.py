class PCLError(Exception):
    """Base class for library errors."""


class PreconditionError(PCLError, ValueError):
    """An input violates an operation's precondition."""


class BoundExceeded(PCLError):
    """A configured size bound would be exceeded."""
