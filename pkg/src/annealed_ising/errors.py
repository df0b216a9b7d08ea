"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid input parameters (bad exponent, index out of range, ...)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to reach its tolerance.

    Parameters
    ----------
    message : str
    tolerance : float, optional
        The tolerance that could not be met, echoed by the CLI.
    achieved : float, optional
        Best error estimate actually reached.
    """

    def __init__(self, message, tolerance=None, achieved=None):
        super().__init__(message)
        self.tolerance = tolerance
        self.achieved = achieved


class CriticalDivergence(NumericalError):
    """Quantity diverges exactly at the critical point (1 - theta*nu == 0 with z* = 0)."""


class BracketError(NumericalError):
    """Root bracketing failed."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge."""
