"""Exception types raised across the package."""


class PolygamyLabError(Exception):
    """Base class for all package errors."""


class ArgumentError(PolygamyLabError, ValueError):
    """An argument has the wrong shape, layout or index."""


class DomainError(PolygamyLabError, ValueError):
    """A value lies outside the domain where the quantity is defined."""


class NumericError(PolygamyLabError, ArithmeticError):
    """A numerical routine could not produce a trustworthy result."""
