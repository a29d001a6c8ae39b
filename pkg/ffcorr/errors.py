"""
Exceptions raised by the ffcorr package.
"""


class DomainError(ValueError):
    """Raised when an argument falls outside an operation's mathematical domain."""
    pass


class ResourceError(Exception):
    """Raised if an enumeration would exceed its configured size cap."""
    pass


class NumericError(ArithmeticError):
    """Raised if a floating-point computation misses its accuracy contract."""
    pass


class InvalidConfig(Exception):
    """Raised if an experiment configuration file or flag is malformed."""
    pass
