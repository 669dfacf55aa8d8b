"""Per-point spanning/Steiner length densities and the Steiner ratio function.

The ratio at ``(omega, a)`` takes the m=1 Steiner density as numerator and the
smallest m-spanning density over all skips ``m >= 1`` as denominator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .errors import SearchCapExceeded, UndefinedSRF, WindowWarning
from .helix import HelixParams, a_coefficient, full_tree_feasible

M_CAP = 1_000_000


@dataclass(frozen=True)
class DensityPair:
    m: int
    spanning: float
    steiner: Optional[float]


@dataclass(frozen=True)
class SrfSample:
    params: HelixParams
    densities: list[DensityPair]
    m_star: int
    rho: float
    # rho_m for m = 1..len(densities); max(rho_m) == rho
    rho_m: list[float]


@dataclass(frozen=True)
class CriticalPoint:
    omega_R: float
    a_R: float
    rho_R: float


def _spanning(m, x, omega):
    # 1 + A_m = 4 sin^2(m w / 2), free of cancellation near m w = 2 pi k
    h = math.sin(0.5 * m * omega)
    return math.sqrt(m * m * x * x + 4.0 * h * h)


def spanning_density(m: int, params: HelixParams) -> float:
    """Chord length between ``P_i`` and ``P_{i+m}``; the m-spanning length per point."""
    return _spanning(m, params.step, params.omega)


def steiner_density(m: int, params: HelixParams) -> Optional[float]:
    """Per-point length of the m-Steiner tree, ``None`` when ``A_m <= 0``."""
    A = a_coefficient(m, params.omega)
    if A <= 0.0:
        return None
    return 1.0 + m * params.step * math.sqrt(A / (1.0 + A))


def min_spanning_density(params: HelixParams, m_cap: int = M_CAP) -> tuple[int, float]:
    """Smallest spanning density over all skips; ties go to the smallest m.

    Since ``1 + A_m >= 0`` the m-th density is at least ``m * a * omega``, so
    the scan stops once that bound reaches the best value found.
    """
    x = params.step
    best_m, best = 1, spanning_density(1, params)
    m = 2
    while m * x < best:
        if m > m_cap:
            raise SearchCapExceeded(
                f"skip search passed m={m_cap} at omega={params.omega!r}, a={params.a!r}"
            )
        d = _spanning(m, x, params.omega)
        if d < best:
            best_m, best = m, d
        m += 1
    return best_m, best


def graham_hwang_window() -> tuple[float, float]:
    lo = math.acos(0.25)
    return lo, 2.0 * math.pi - lo


def in_window(omega: float) -> bool:
    lo, hi = graham_hwang_window()
    return lo <= omega <= hi


def critical_point() -> CriticalPoint:
    omega = math.pi - math.acos(2.0 / 3.0)
    return CriticalPoint(
        omega_R=omega,
        a_R=math.sqrt(30.0) / (9.0 * omega),
        rho_R=(3.0 * math.sqrt(3.0) + math.sqrt(7.0)) / 10.0,
    )


def srf(params: HelixParams, m_cap: int = M_CAP) -> SrfSample:
    numerator = steiner_density(1, params)
    if numerator is None:
        raise UndefinedSRF(
            f"A1 <= 0 at omega={params.omega!r}: the m=1 Steiner helix does not exist"
        )
    if not in_window(params.omega):
        warnings.warn(
            f"omega={params.omega!r} lies outside the Graham-Hwang window",
            WindowWarning,
            stacklevel=2,
        )
    m_star, denom = min_spanning_density(params, m_cap)
    # record every m up to the search horizon so max(rho_m) can be audited
    m_top = max(m_star + 2, int(denom // params.step) + 1 if params.step > 0 else m_star)
    m_top = min(m_top, m_cap)
    densities = [
        DensityPair(m, spanning_density(m, params), steiner_density(m, params))
        for m in range(1, m_top + 1)
    ]
    rho_m = [numerator / d.spanning for d in densities]
    return SrfSample(params, densities, m_star, numerator / denom, rho_m)


def smaller_steiner_numerators(params: HelixParams, m_max: int = 20) -> list[int]:
    """Skips ``m > 1`` whose defined Steiner density undercuts the m=1 numerator.

    Diagnostic only: the ratio keeps the m=1 numerator regardless.
    """
    base = steiner_density(1, params)
    out = []
    for m in range(2, m_max + 1):
        s = steiner_density(m, params)
        if s is not None and base is not None and s < base:
            out.append(m)
    return out


def feasibility_profile(params: HelixParams, m_max: int = 10) -> dict[int, bool]:
    return {m: full_tree_feasible(m, params) for m in range(1, m_max + 1)}
