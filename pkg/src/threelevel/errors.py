"""Exception hierarchy shared across the package."""


class ThreeLevelError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(ThreeLevelError, ValueError):
    """Input violates a documented precondition."""


class DegeneracyError(ThreeLevelError):
    """Root structure does not match the requested propagator branch.

    Raised when the generic residue formulas would divide by a vanishing
    root separation, or when a degenerate Lambda-type spectrum is requested
    (only the non-degenerate Lambda solution is implemented).
    """


class StepSizeError(ThreeLevelError):
    """Fixed-step integrator lost norm control; reduce the step size."""


class GridMismatchError(ThreeLevelError, ValueError):
    """Two time series were sampled on different grids."""


class ConfigError(ThreeLevelError, ValueError):
    """Scenario configuration failed validation.

    Attributes
    ----------
    problems : dict
        Offending key path mapped to a human readable message.
    """

    def __init__(self, problems):
        self.problems = dict(problems)
        lines = [f"{key}: {msg}" for key, msg in self.problems.items()]
        super().__init__("invalid configuration\n  " + "\n  ".join(lines))
