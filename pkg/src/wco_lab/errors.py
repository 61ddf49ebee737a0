"""Exception types shared across the package."""


class WcoError(ValueError):
    pass


class TruncationError(WcoError):
    """An index or operation does not fit inside the truncation caps."""


class DomainError(WcoError):
    """A point lies outside the open polydisk (or hits a pole)."""


class ParameterError(WcoError):
    """Symbol or conjugation parameters violate a required condition.

    ``condition`` names the violated condition and ``residual`` carries the
    amount by which it fails, when that is meaningful.
    """

    def __init__(self, message, condition=None, residual=None):
        super().__init__(message)
        self.condition = condition
        self.residual = residual


class UnderResolvedError(WcoError):
    """A quadrature grid is too coarse to integrate the requested degrees exactly."""
