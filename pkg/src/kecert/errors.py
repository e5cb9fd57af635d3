"""Exception types shared across the package."""


class KecertError(Exception):
    """Base class for all package errors."""


class ConfigError(KecertError):
    """Invalid or unknown configuration input."""


class GridError(KecertError):
    """Grid construction failed (resolvability, budget, empty interior)."""


class DomainConvexityError(KecertError):
    """A defining function failed the strict convexity check.

    Carries the witness point where the Hessian degenerates.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class StencilError(KecertError):
    """A node does not have the stencil neighborhood an operation needs."""


class SingularMatrixError(KecertError):
    """A matrix that must be inverted is singular to working tolerance."""

    def __init__(self, message, min_abs_eigenvalue=None):
        super().__init__(message)
        self.min_abs_eigenvalue = min_abs_eigenvalue


class PositivityError(KecertError):
    """The mixed complex Hessian lost positive definiteness at a node."""

    def __init__(self, message, node=None, lambda_min=None):
        super().__init__(message)
        self.node = node
        self.lambda_min = lambda_min


class SolverFailure(KecertError):
    """The nonlinear solve could not continue (damping floor, linear solve)."""


class DumpFormatError(KecertError):
    """A binary grid dump is corrupt or has the wrong magic header."""
