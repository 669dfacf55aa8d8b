"""Helical point sets, skip subsequences and the closed-form helix quantities.

Terminals sit on the unit cylinder, ``P_i = (cos iw, sin iw, a i w)``. The
analytic Steiner points share angle and height with their terminal but lie at
radius ``r_m``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Optional

import numpy as np

from .errors import InfeasibleConfiguration, RadiusWarning

TWO_PI = 2.0 * math.pi

Kind = Literal["terminal", "steiner"]


@dataclass(frozen=True)
class HelixParams:
    """Angular step ``omega`` (radians) and pitch coefficient ``a``."""

    omega: float
    a: float

    def __post_init__(self):
        if not math.isfinite(self.omega) or not 0.0 < self.omega < TWO_PI:
            raise ValueError(f"omega must lie in (0, 2*pi), got {self.omega!r}")
        if not math.isfinite(self.a) or self.a <= 0.0:
            raise ValueError(f"a must be finite and positive, got {self.a!r}")

    @property
    def step(self) -> float:
        """Height gained per index step, ``a * omega``."""
        return self.a * self.omega


class Point3(NamedTuple):
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


@dataclass(frozen=True)
class SkipSequence:
    offset: int
    skip: int
    l_max: int
    kind: Kind

    def indices(self) -> range:
        return range(self.offset, self.offset + self.l_max * self.skip + 1, self.skip)


@dataclass
class PointSet:
    n: int
    m: int
    params: HelixParams
    terminals: np.ndarray
    # row k holds the Steiner point paired with terminal k + 1
    steiner_seed: Optional[np.ndarray] = field(default=None)


def a_coefficient(m: int, omega: float) -> float:
    return 1.0 - 2.0 * math.cos(m * omega)


def steiner_radius(m: int, params: HelixParams) -> Optional[float]:
    """Radius of the m-Steiner helix, or ``None`` when ``A_m <= 0``.

    A radius above 1 is returned as-is but raises a :class:`RadiusWarning`.
    """
    A = a_coefficient(m, params.omega)
    if A <= 0.0:
        return None
    r = m * params.step / math.sqrt(A * (1.0 + A))
    if r > 1.0:
        warnings.warn(
            f"Steiner radius r_{m} = {r:.6g} lies outside the terminal cylinder",
            RadiusWarning,
            stacklevel=2,
        )
    return r


def full_tree_feasible(m: int, params: HelixParams) -> bool:
    A = a_coefficient(m, params.omega)
    if A <= 0.0:
        return False
    x = m * params.step
    return (1.0 + A) ** 2 >= x * x + 1.0 + A


def l_max(n: int, offset: int, m: int, kind: Kind) -> int:
    shift = 1 if kind == "terminal" else 2
    return (n - offset - shift) // m


def make_skip_sequences(n: int, m: int, kind: Kind = "terminal") -> list[SkipSequence]:
    """Split the terminal (or Steiner) index range into ``m`` skip-``m`` chains.

    Terminal chains partition ``0..n-1``; Steiner chains partition ``0..n-2``.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if m >= n:
        raise ValueError(f"skip m={m} must be smaller than n={n}")
    if kind not in ("terminal", "steiner"):
        raise ValueError(f"unknown sequence kind {kind!r}")
    return [SkipSequence(j, m, l_max(n, j, m, kind), kind) for j in range(m)]


def terminal_point(index: int, params: HelixParams) -> Point3:
    t = index * params.omega
    return Point3(math.cos(t), math.sin(t), params.a * t)


def steiner_point_analytic(index: int, m: int, params: HelixParams) -> Point3:
    r = steiner_radius(m, params)
    if r is None:
        raise InfeasibleConfiguration(
            f"A_{m} = {a_coefficient(m, params.omega):.6g} <= 0: no Steiner helix for m={m}"
        )
    t = index * params.omega
    return Point3(r * math.cos(t), r * math.sin(t), params.a * t)


def helix_points(indices, params: HelixParams, radius: float = 1.0) -> np.ndarray:
    """Vectorised generator: rows ``(r cos iw, r sin iw, a i w)``."""
    t = np.asarray(indices, dtype=float) * params.omega
    return np.column_stack([radius * np.cos(t), radius * np.sin(t), params.a * t])


def build_point_set(n: int, m: int, params: HelixParams, with_steiner: bool = True) -> PointSet:
    """Terminals ``P_0..P_{n-1}`` and, optionally, the ``n - 2`` analytic seeds.

    Seeds are generated for the interior indices ``1..n-2``, one per interior
    terminal of the 3-sausage.
    """
    seqs = make_skip_sequences(n, m, "terminal")
    order = sorted(i for s in seqs for i in s.indices())
    if order != list(range(n)):
        raise AssertionError("skip sequences do not partition the terminal range")
    terminals = helix_points(order, params)

    seed = None
    if with_steiner:
        if not full_tree_feasible(m, params):
            raise InfeasibleConfiguration(
                f"no full Steiner tree for m={m} at omega={params.omega!r}, a={params.a!r}"
            )
        r = steiner_radius(m, params)
        seed = helix_points(range(1, n - 1), params, radius=r)
    return PointSet(n=n, m=m, params=params, terminals=terminals, steiner_seed=seed)
