"""Feasible domain, grid scan, triple-intersection refinement and certificate.

Domain membership at ``(omega, a)``:

* omega inside the Graham-Hwang window;
* under the curve rho_1 = 1, i.e. the m=1 Steiner helix fits inside the
  terminal cylinder (``r_1 <= 1``; rho_1 touches 1 exactly there);
* not under any curve rho_m = 1 for ``m >= 2``, i.e. ``rho_m < 1``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import ConvergenceError, EmptyDomainError, SearchCapExceeded
from .helix import HelixParams, a_coefficient, full_tree_feasible
from .srf import M_CAP, graham_hwang_window, in_window, spanning_density, srf, steiner_density

SCHEMA_VERSION = 1
GRAHAM_HWANG = math.sqrt(3.0) / 3.0
BISECT_TOL = 1e-12
FD_STEP = 1e-7
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class FeasibleDomain:
    omega_lo: float
    omega_hi: float
    a_max: float = 1.5
    m_cap: int = M_CAP

    @classmethod
    def default(cls, a_max: float = 1.5) -> "FeasibleDomain":
        lo, hi = graham_hwang_window()
        return cls(lo, hi, a_max)

    def contains(self, omega: float, a: float) -> bool:
        if not self.omega_lo <= omega <= self.omega_hi or a <= 0.0:
            return False
        params = HelixParams(omega, a)
        if not full_tree_feasible(1, params):
            return False
        num = steiner_density(1, params)
        x = params.step
        m = 2
        # rho_m >= 1 needs spanning_m <= num, impossible once m * x > num
        while m * x <= num:
            if m > self.m_cap:
                raise SearchCapExceeded(f"domain test passed m={self.m_cap}")
            if spanning_density(m, params) <= num:
                return False
            m += 1
        return True


def domain_contains(omega: float, a: float) -> bool:
    return FeasibleDomain.default().contains(omega, a)


def domain_slice(omega: float, a_max: float = 1.5, steps: int = 400, domain=None) -> list[tuple[float, float]]:
    """Intervals in ``a`` (over ``(0, a_max]``) inside the domain at fixed omega.

    Transitions seen on a uniform probe are refined by bisection to
    ``BISECT_TOL``.
    """
    domain = domain or FeasibleDomain.default(a_max)
    grid = a_max * np.arange(1, steps + 1) / steps
    inside = [domain.contains(omega, float(a)) for a in grid]

    def edge(lo, hi, lo_inside):
        while hi - lo > BISECT_TOL:
            mid = 0.5 * (lo + hi)
            if domain.contains(omega, mid) == lo_inside:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    intervals = []
    start = grid[0] if inside[0] else None
    for k in range(1, steps):
        if inside[k] != inside[k - 1]:
            e = edge(grid[k - 1], grid[k], inside[k - 1])
            if inside[k]:
                start = e
            else:
                intervals.append((start, e))
                start = None
    if start is not None:
        intervals.append((start, float(grid[-1])))
    return intervals


@dataclass(frozen=True)
class GridSpec:
    omega_min: float
    omega_max: float
    n_omega: int
    a_min: float
    a_max: float
    n_a: int

    @classmethod
    def default(cls, n_omega: int = 400, n_a: int = 400) -> "GridSpec":
        lo, hi = graham_hwang_window()
        return cls(lo, hi, n_omega, 0.0, 1.5, n_a)

    def validate(self):
        lo, hi = graham_hwang_window()
        if self.n_omega < 1 or self.n_a < 1:
            raise ValueError("grid step counts must be positive")
        if not (math.isfinite(self.omega_min) and math.isfinite(self.omega_max)):
            raise ValueError("omega range must be finite")
        if not lo <= self.omega_min <= self.omega_max <= hi:
            raise ValueError(
                f"omega range [{self.omega_min}, {self.omega_max}] must lie inside [{lo}, {hi}]"
            )
        if not 0.0 <= self.a_min < self.a_max or not math.isfinite(self.a_max):
            raise ValueError("need 0 <= a_min < a_max < inf")

    def omegas(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_omega)

    def a_values(self) -> np.ndarray:
        # open at a_min, closed at a_max
        j = np.arange(1, self.n_a + 1)
        return self.a_min + (self.a_max - self.a_min) * j / self.n_a


@dataclass
class ScanResult:
    spec: GridSpec
    omega: np.ndarray
    a: np.ndarray
    m_star: np.ndarray
    rho: np.ndarray
    in_domain: np.ndarray
    argmin: tuple[int, int]
    minimum: tuple[float, float, float]

    def sample(self, i: int, j: int):
        return srf(HelixParams(float(self.omega[i]), float(self.a[j])))

    def boundary_mask(self) -> np.ndarray:
        """In-domain nodes with an out-of-domain 4-neighbour or on the grid edge."""
        d = self.in_domain
        pad = np.pad(d, 1, constant_values=False)
        interior = pad[:-2, 1:-1] & pad[2:, 1:-1] & pad[1:-1, :-2] & pad[1:-1, 2:]
        return d & ~interior


def _scan_row(omega: float, a: np.ndarray, m_cap: int):
    k = a.size
    m_star = np.zeros(k, dtype=np.int64)
    rho = np.full(k, np.nan)
    A1 = a_coefficient(1, omega)
    if A1 <= 0.0:
        return m_star, rho, np.zeros(k, dtype=bool)
    x = a * omega
    num = 1.0 + x * math.sqrt(A1 / (1.0 + A1))
    best = np.sqrt(x * x + 4.0 * math.sin(0.5 * omega) ** 2)
    m_star[:] = 1
    excluded = np.zeros(k, dtype=bool)
    m = 2
    while True:
        mx = m * x
        active = (mx < best) | (mx <= num)
        if not active.any():
            break
        if m > m_cap:
            raise SearchCapExceeded(f"scan row omega={omega!r} passed m={m_cap}")
        d = np.sqrt(mx * mx + 4.0 * math.sin(0.5 * m * omega) ** 2)
        win = active & (d < best)
        best = np.where(win, d, best)
        m_star[win] = m
        excluded |= active & (d <= num)
        m += 1
    rho = num / best
    feasible = (1.0 + A1) ** 2 >= x * x + 1.0 + A1
    return m_star, rho, feasible & ~excluded & in_window(omega)


def default_threads() -> int:
    raw = os.environ.get("HELIX_STEINER_THREADS", "1")
    try:
        val = int(raw)
    except ValueError:
        raise ValueError(f"HELIX_STEINER_THREADS must be an integer >= 1, got {raw!r}")
    if val < 1:
        raise ValueError(f"HELIX_STEINER_THREADS must be >= 1, got {val}")
    return val


def scan(spec: GridSpec, threads: Optional[int] = None, m_cap: int = M_CAP) -> ScanResult:
    """Evaluate the ratio and domain membership on every grid node.

    Rows run independently and are stored by grid index, so the result does
    not depend on the thread count.
    """
    spec.validate()
    threads = threads or default_threads()
    omegas, avals = spec.omegas(), spec.a_values()
    if threads == 1:
        rows = [_scan_row(float(w), avals, m_cap) for w in omegas]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda w: _scan_row(float(w), avals, m_cap), omegas))
    m_star = np.stack([r[0] for r in rows])
    rho = np.stack([r[1] for r in rows])
    dom = np.stack([r[2] for r in rows])
    if not dom.any():
        raise EmptyDomainError("no grid node lies inside the feasible domain")
    masked = np.where(dom, rho, np.inf)
    i, j = np.unravel_index(int(np.argmin(masked)), masked.shape)
    return ScanResult(
        spec, omegas, avals, m_star, rho, dom,
        (int(i), int(j)), (float(omegas[i]), float(avals[j]), float(rho[i, j])),
    )


@dataclass
class RefinedCritical:
    omega: float
    a: float
    rho: float
    residuals: tuple[float, float]
    iterations: int


def _residuals(omega, a):
    p = HelixParams(omega, a)
    d1 = spanning_density(1, p)
    return np.array([d1 - spanning_density(2, p), d1 - spanning_density(3, p)]), d1


def refine_critical(initial: tuple[float, float], tol: float = 1e-12, max_iter: int = 50) -> RefinedCritical:
    """Damped Newton solve of ``d1 = d2 = d3`` (spanning densities).

    The Jacobian is a central difference with relative step ``FD_STEP``.
    Residuals are only meaningful down to the rounding floor of the densities;
    a ``tol`` below that floor is reported as non-convergence.
    """
    v = np.array(initial, dtype=float)
    F, d1 = _residuals(*v)
    floor = 16 * EPS * d1
    target = max(tol, floor)
    it = 0
    while np.abs(F).max() >= target:
        if it >= max_iter:
            break
        J = np.empty((2, 2))
        for c in range(2):
            h = FD_STEP * max(abs(v[c]), 1.0)
            e = np.zeros(2)
            e[c] = h
            J[:, c] = (_residuals(*(v + e))[0] - _residuals(*(v - e))[0]) / (2 * h)
        if abs(np.linalg.det(J)) < 1e-14:
            raise ConvergenceError(
                f"singular Jacobian at omega={v[0]!r}, a={v[1]!r}",
                iterations=it, residual=float(np.abs(F).max()),
            )
        step = np.linalg.solve(J, -F)
        lam = 1.0
        norm0 = np.abs(F).max()
        while True:
            trial = v + lam * step
            try:
                Ft, d1 = _residuals(*trial)
            except ValueError:
                Ft = None
            if Ft is not None and np.abs(Ft).max() < norm0:
                break
            lam *= 0.5
            if lam < 1e-10:
                Ft = None
                break
        it += 1
        if Ft is None:
            break  # stagnated at the rounding floor
        v, F = trial, Ft
    resid = float(np.abs(F).max())
    if resid >= tol or tol < floor:
        why = f"tol {tol:.1e} is below the rounding floor {floor:.1e}; " if tol < floor else ""
        raise ConvergenceError(
            f"{why}refinement stopped after {it} iterations with residual {resid:.3e}",
            iterations=it,
            residual=resid,
            result=(float(v[0]), float(v[1]), float(F[0]), float(F[1])),
        )
    rho = srf(HelixParams(float(v[0]), float(v[1]))).rho
    return RefinedCritical(float(v[0]), float(v[1]), rho, (float(F[0]), float(F[1])), it)


@dataclass
class Certificate:
    grid: dict
    a_cap: float
    refined: Optional[dict]
    scan_minimum: dict
    boundary_margin: Optional[float]
    graham_hwang_ok: bool
    passed: bool
    violations: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)


def _sample_record(scan_res: ScanResult, i, j, check):
    return {
        "check": check, "i": int(i), "j": int(j),
        "omega": float(scan_res.omega[i]), "a": float(scan_res.a[j]),
        "rho": float(scan_res.rho[i, j]),
    }


def certify_minimum(
    scan_res: ScanResult,
    refined: Optional[RefinedCritical],
    rho_tol: float = 1e-9,
    refine_error: Optional[ConvergenceError] = None,
) -> Certificate:
    """Check the refined point against every scanned sample.

    Passes when the refined ratio is no worse than the grid minimum, every
    in-domain sample sits at or above it (up to ``rho_tol``) and above the
    Graham-Hwang floor, and the domain boundary clears it by a positive margin.
    """
    spec = scan_res.spec
    dom = scan_res.in_domain
    violations = []
    mi, mj = scan_res.argmin
    scan_min = {"omega": scan_res.minimum[0], "a": scan_res.minimum[1],
                "rho": scan_res.minimum[2], "cell": [mi, mj]}

    gh_bad = np.argwhere(dom & ~(scan_res.rho >= GRAHAM_HWANG))
    violations += [_sample_record(scan_res, i, j, "graham_hwang_floor") for i, j in gh_bad]

    refined_rec = None
    margin = None
    if refined is None:
        violations.append({
            "check": "refinement",
            "message": str(refine_error) if refine_error else "no refined point",
            "iterations": getattr(refine_error, "iterations", None),
            "residual": getattr(refine_error, "residual", None),
        })
    else:
        refined_rec = {
            "omega": refined.omega, "a": refined.a, "rho": refined.rho,
            "residuals": list(refined.residuals), "iterations": refined.iterations,
        }
        if not refined.rho <= scan_res.minimum[2] + rho_tol:
            violations.append({"check": "refined_not_minimal", "rho": refined.rho,
                               "scan_min": scan_res.minimum[2]})
        below = np.argwhere(dom & ~(scan_res.rho >= refined.rho - rho_tol))
        violations += [_sample_record(scan_res, i, j, "below_refined") for i, j in below]
        bmask = scan_res.boundary_mask()
        if bmask.any():
            margin = float(scan_res.rho[bmask].min() - refined.rho)
            if not margin > 0:
                violations += [
                    _sample_record(scan_res, i, j, "boundary_margin")
                    for i, j in np.argwhere(bmask & (scan_res.rho <= refined.rho))
                ]

    return Certificate(
        grid=asdict(spec),
        a_cap=spec.a_max,
        refined=refined_rec,
        scan_minimum=scan_min,
        boundary_margin=margin,
        graham_hwang_ok=len(gh_bad) == 0,
        passed=not violations and margin is not None and margin > 0,
        violations=violations,
    )


def certify(
    spec: Optional[GridSpec] = None,
    tol: float = 1e-12,
    rho_tol: float = 1e-9,
    threads: Optional[int] = None,
    scan_res: Optional[ScanResult] = None,
) -> tuple[Certificate, ScanResult, Optional[RefinedCritical]]:
    """Scan, refine from the grid argmin, and certify."""
    if scan_res is None:
        scan_res = scan(spec or GridSpec.default(), threads=threads)
    refined, err = None, None
    try:
        refined = refine_critical(scan_res.minimum[:2], tol=tol)
    except ConvergenceError as exc:
        err = exc
    return certify_minimum(scan_res, refined, rho_tol, err), scan_res, refined
