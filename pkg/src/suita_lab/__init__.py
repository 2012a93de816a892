"""Bergman kernels, Kobayashi indicatrix volumes and the function
F = (K * vol(I))^(1/2) for two families of convex ellipsoids in C^2:

    Omega_m = {|z1|^(2m) + |z2|^2 < 1},  m >= 1/2, at points (b, 0)
    the l1-ball {|z1| + |z2| < 1},        at points (b, b) and (b, 0)
"""

from .errors import (
    SuitaError,
    ParameterError,
    DomainError,
    ConstraintError,
    ConvergenceError,
    GeometryError,
    CoverageError,
)
from .domains import EllipsoidSpec, VolumeResult

__version__ = "0.1.0"

__all__ = [
    "SuitaError",
    "ParameterError",
    "DomainError",
    "ConstraintError",
    "ConvergenceError",
    "GeometryError",
    "CoverageError",
    "EllipsoidSpec",
    "VolumeResult",
]
