"""Exception types shared across the package."""


class OrbiconfError(Exception):
    """Base class for errors raised by the package."""


class CapacityError(OrbiconfError):
    """A construction would exceed its configured size limit."""


class NotRegularError(OrbiconfError, ValueError):
    """A group action is not regular where regularity is required."""


class InputError(OrbiconfError, ValueError):
    """Malformed or inconsistent input data."""


class PreconditionError(OrbiconfError, ValueError):
    """An operation was called outside its domain."""
