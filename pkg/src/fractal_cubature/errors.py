"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid input: bad config, non-contractive map, malformed weights."""


class NumericalError(ArithmeticError):
    """A numerical procedure failed to meet its tolerance."""
