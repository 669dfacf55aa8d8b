"""Steiner ratio function of helical point sets.

Closed-form densities and the ratio surface (:mod:`.srf`), helix geometry
(:mod:`.helix`), finite 3-sausage trees with a Fermat relocation optimiser
(:mod:`.trees`) and the grid-scan certificate of the global minimum
(:mod:`.extremum`).
"""

from .errors import (
    ConvergenceError,
    EmptyDomainError,
    InfeasibleConfiguration,
    RadiusWarning,
    SearchCapExceeded,
    UndefinedSRF,
    WindowWarning,
)
from .helix import HelixParams, Point3
from .kernels import BACKEND
from .srf import critical_point, srf

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "EmptyDomainError",
    "HelixParams",
    "InfeasibleConfiguration",
    "Point3",
    "RadiusWarning",
    "SearchCapExceeded",
    "UndefinedSRF",
    "WindowWarning",
    "critical_point",
    "srf",
]
