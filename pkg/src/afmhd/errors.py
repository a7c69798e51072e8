"""Exception types shared across the solver."""

from __future__ import annotations


class SolverError(Exception):
    """Base class for all solver failures."""


class NonpositiveDensity(SolverError):
    """Conserved state carries rho <= 0 where a conversion needs rho > 0."""


class InadmissibleState(SolverError):
    """A state violates the required density or pressure floor."""


class PPViolation(SolverError):
    """A positivity guarantee failed where the scheme promises it holds."""


class NoAdmissibleState(SolverError):
    """An unlimited update left the admissible set and no repair is allowed."""


class ConfigError(SolverError):
    """Run configuration is malformed or inconsistent."""


class UnknownProblem(ConfigError):
    """Requested problem name is not registered."""


class BadParams(ConfigError):
    """Problem parameters are missing, unknown, or out of range."""


class NoExactSolution(SolverError):
    """The problem does not provide a closed-form reference solution."""


class ConvergenceFailure(SolverError):
    """An iterative root solve failed to bracket or converge."""


class DegenerateInput(SolverError):
    """Input data does not satisfy a routine's preconditions."""
