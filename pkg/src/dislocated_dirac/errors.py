"""Exception types raised across the package."""


class DiracError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class DomainError(DiracError, ValueError):
    """An argument lies outside the domain of the requested quantity."""

    exit_code = 2


class BranchPointError(DomainError):
    """The spectral point is (numerically) one of the corners +-m +- i."""


class SpecialPointError(DomainError):
    """The step-potential equation degenerates at z = +-m - b."""


class WindowError(DomainError):
    """A real search window straddles a singular point of the scan."""


class ConfigError(DiracError, ValueError):
    """Invalid discretization or command-line configuration."""

    exit_code = 2


class HypothesisError(DiracError):
    """A smallness hypothesis on the potential is violated."""

    exit_code = 3


class NotAnEigenvalueError(DiracError):
    """The requested point does not satisfy the eigenvalue condition."""

    exit_code = 3


class ConvergenceError(DiracError, RuntimeError):
    """An iterative method or a refinement check did not converge."""

    exit_code = 4
