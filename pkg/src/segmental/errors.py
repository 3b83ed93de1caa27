"""Exception types raised by the segmental interpolation routines."""


class SingularSystem(ArithmeticError):
    """The segment set is not unisolvent (a pivot fell below threshold)."""

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index


class ResonantRadius(SingularSystem):
    """Arc radius hits an excluded value k*pi/j, so some K_rho eigenvalue vanishes."""

    def __init__(self, message, rho=None, j=None, k=None):
        super().__init__(message)
        self.rho = rho
        self.j = j
        self.k = k


class EvaluationError(ValueError):
    """A sampled function returned a non-finite value."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa
