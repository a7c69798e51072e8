"""Third-order active flux solver for 2D ideal MHD with positivity
preservation.

The scheme evolves cell averages together with shared point values at face
midpoints and cell corners on a Cartesian mesh, closes the divergence terms
with a nonconservative source, and guards every update with a provably
positivity-preserving fallback and blending limiters.
"""

from __future__ import annotations

from .errors import (
    ConfigError,
    ConvergenceFailure,
    DegenerateInput,
    InadmissibleState,
    NoAdmissibleState,
    NonpositiveDensity,
    NoExactSolution,
    PPViolation,
    SolverError,
    UnknownProblem,
)
from .physics import GasModel

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceFailure",
    "DegenerateInput",
    "GasModel",
    "InadmissibleState",
    "NoAdmissibleState",
    "NonpositiveDensity",
    "NoExactSolution",
    "PPViolation",
    "SolverError",
    "UnknownProblem",
    "__version__",
]
