"""Exception types raised by tsallisop."""

import numpy as np


class DomainError(ValueError):
    """A spectral function was asked to act outside its domain.

    ``eigenvalue`` holds the offending eigenvalue when one is known.
    """

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NotStrictlyPositiveError(DomainError):
    pass


class ParameterError(ValueError):
    pass


class ConvergenceError(np.linalg.LinAlgError):
    pass
