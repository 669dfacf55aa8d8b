"""Finite trees on helical terminals.

The 3-sausage joins Steiner point ``S_i`` (``i = 1..n-2``) to ``P_i``, to its
predecessor (``P_0`` for ``i = 1``) and to its successor (``P_{n-1}`` for
``i = n-2``). Steiner positions are stored row-wise: row ``k`` is ``S_{k+1}``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from . import kernels
from .errors import ConvergenceError, InfeasibleConfiguration
from .helix import (
    HelixParams,
    Point3,
    a_coefficient,
    helix_points,
    make_skip_sequences,
    steiner_radius,
)

log = logging.getLogger(__name__)

COLLAPSE_FACTOR = 0.9


@dataclass(frozen=True)
class SausageTopology:
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"a 3-sausage needs n >= 3 terminals, got {self.n}")

    def neighbors(self, i: int) -> tuple[str, str, str]:
        """Labels adjacent to ``S_i``: (previous, own terminal, next)."""
        if not 1 <= i <= self.n - 2:
            raise IndexError(i)
        prev = "P0" if i == 1 else f"S{i - 1}"
        nxt = f"P{self.n - 1}" if i == self.n - 2 else f"S{i + 1}"
        return prev, f"P{i}", nxt

    @property
    def edges(self) -> list[tuple[str, str]]:
        out = [("P0", "S1")]
        for i in range(1, self.n - 1):
            out.append((f"S{i}", f"P{i}"))
            out.append((f"S{i}", f"S{i + 1}") if i < self.n - 2 else (f"S{i}", f"P{self.n - 1}"))
        return out

    def degrees(self) -> dict[str, int]:
        deg: dict[str, int] = {}
        for u, v in self.edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return deg


@dataclass
class AngleCheck:
    angles: np.ndarray  # (n-2, 3) degrees: (prev, term), (term, next), (prev, next)
    degenerate: np.ndarray
    ok: bool
    max_deviation: float


@dataclass
class SausageTree:
    topology: SausageTopology
    terminals: np.ndarray
    steiner: np.ndarray
    params: Optional[HelixParams] = None
    degenerate: np.ndarray = field(default=None)
    converged: Optional[bool] = None
    iterations: int = 0
    last_displacement: float = math.nan
    history: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.terminals = np.ascontiguousarray(self.terminals, dtype=float)
        self.steiner = np.ascontiguousarray(self.steiner, dtype=float)
        n = self.topology.n
        if self.terminals.shape != (n, 3) or self.steiner.shape != (n - 2, 3):
            raise ValueError("terminal/Steiner arrays do not match the topology size")
        if self.degenerate is None:
            self.degenerate = np.zeros(n - 2, dtype=np.uint8)

    @property
    def n(self) -> int:
        return self.topology.n

    def edge_vectors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectors from each Steiner point to its (prev, terminal, next) neighbours."""
        S, P = self.steiner, self.terminals
        prev = np.vstack([P[:1], S[:-1]])
        nxt = np.vstack([S[1:], P[-1:]])
        return prev - S, P[1:-1] - S, nxt - S

    @property
    def total_length(self) -> float:
        to_prev, to_term, _ = self.edge_vectors()
        return float(
            np.linalg.norm(to_prev, axis=1).sum()
            + np.linalg.norm(to_term, axis=1).sum()
            + np.linalg.norm(self.terminals[-1] - self.steiner[-1])
        )

    @property
    def angle_report(self) -> np.ndarray:
        return check_angles(self).angles

    def copy(self) -> "SausageTree":
        return SausageTree(
            self.topology,
            self.terminals.copy(),
            self.steiner.copy(),
            self.params,
            self.degenerate.copy(),
            self.converged,
            self.iterations,
            self.last_displacement,
            list(self.history),
        )


@dataclass
class LadderTree:
    m: int
    n: int
    edges: list[tuple[int, int]]
    total_length: float


def build_sausage(
    n: int, params: HelixParams, seed: Literal["analytic", "collapsed"] = "analytic"
) -> SausageTree:
    topo = SausageTopology(n)
    terminals = helix_points(range(n), params)
    if seed == "analytic":
        r = steiner_radius(1, params)
        if r is None:
            raise InfeasibleConfiguration(
                f"A1 = {a_coefficient(1, params.omega):.6g} <= 0: no analytic Steiner seed"
            )
        steiner = helix_points(range(1, n - 1), params, radius=r)
    elif seed == "collapsed":
        steiner = terminals[1:-1] * np.array([COLLAPSE_FACTOR, COLLAPSE_FACTOR, 1.0])
    else:
        raise ValueError(f"unknown seed {seed!r}")
    return SausageTree(topo, terminals, steiner, params)


def fermat_point(p1: Sequence[float], p2: Sequence[float], p3: Sequence[float]) -> Point3:
    """Point minimising the summed distance to three points.

    Interior solutions come from the barycentric form of the first isogonic
    centre; a triangle angle of 120 degrees or more returns that vertex.
    """
    x, y, z, _ = kernels.fermat3(tuple(map(float, p1)), tuple(map(float, p2)), tuple(map(float, p3)))
    return Point3(x, y, z)


def fermat_residuals(tree: SausageTree) -> np.ndarray:
    """Distance each Steiner point would move if relocated with its neighbours held fixed."""
    S, P = tree.steiner, tree.terminals
    out = np.empty(len(S))
    for k in range(len(S)):
        prev = P[0] if k == 0 else S[k - 1]
        nxt = P[-1] if k == len(S) - 1 else S[k + 1]
        x, y, z, _ = kernels.fermat3(tuple(prev), tuple(P[k + 1]), tuple(nxt))
        out[k] = math.dist((x, y, z), S[k])
    return out


def optimize_steiner(
    tree: SausageTree,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    record_history: bool = False,
) -> SausageTree:
    """Cyclic Fermat relocation of every Steiner point until the largest move < ``tol``.

    Each relocation solves its own three-neighbour subproblem exactly, so the
    total length never increases. Raises :class:`ConvergenceError` with the
    partially optimised tree attached when ``max_iter`` sweeps are exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    out = tree.copy()
    out.history = [out.total_length] if record_history else []
    disp = math.inf
    it = 0
    while it < max_iter:
        disp = kernels.sweep(out.terminals, out.steiner, out.degenerate)
        it += 1
        if record_history:
            out.history.append(out.total_length)
        if disp < tol:
            break
    out.iterations = it
    out.last_displacement = disp
    out.converged = disp < tol
    if not out.converged:
        raise ConvergenceError(
            f"Steiner optimisation stopped after {it} sweeps, last displacement {disp:.3e}",
            iterations=it,
            residual=disp,
            result=out,
        )
    log.debug("optimize_steiner: n=%d sweeps=%d disp=%.2e", tree.n, it, disp)
    return out


def check_angles(
    tree: SausageTree, tol_deg: float = 0.1, nodes: Optional[Sequence[int]] = None
) -> AngleCheck:
    """Meeting angles at each Steiner point, in degrees.

    ``nodes`` restricts the pass/fail verdict to the listed Steiner indices
    (1-based, as in ``S_i``); the angle table always covers every node.
    Zero-length edges and nodes flagged by the optimiser count as degenerate.
    """
    vecs = tree.edge_vectors()
    lens = [np.linalg.norm(v, axis=1) for v in vecs]
    zero = np.zeros(tree.n - 2, dtype=bool)
    for L in lens:
        zero |= L == 0.0
    angles = np.full((tree.n - 2, 3), np.nan)
    for col, (i, j) in enumerate(((0, 1), (1, 2), (0, 2))):
        u, v = vecs[i], vecs[j]
        cross = np.linalg.norm(np.cross(u, v), axis=1)
        angles[:, col] = np.degrees(np.arctan2(cross, np.einsum("ij,ij->i", u, v)))
    angles[zero] = np.nan
    degenerate = zero | tree.degenerate.astype(bool)

    sel = np.arange(tree.n - 2) if nodes is None else np.asarray(nodes, dtype=int) - 1
    dev = np.abs(angles[sel] - 120.0)
    bad = degenerate[sel].any() or np.isnan(dev).any()
    max_dev = float(np.nanmax(dev)) if dev.size and not np.isnan(dev).all() else math.nan
    ok = bool(not bad and max_dev <= tol_deg)
    return AngleCheck(angles, degenerate, ok, max_dev)


def interior_nodes(n: int) -> range:
    """Steiner indices 3..n-4: the band away from the two open ends."""
    return range(3, n - 3)


def build_ladder(n: int, m: int, params: HelixParams) -> LadderTree:
    """Spanning tree from the ``m`` skip-``m`` chains plus connectors ``P_j - P_{j+1}``."""
    edges = []
    for seq in make_skip_sequences(n, m, "terminal"):
        idx = list(seq.indices())
        edges.extend(zip(idx[:-1], idx[1:]))
    edges.extend((j, j + 1) for j in range(m - 1))
    pts = helix_points(range(n), params)
    e = np.asarray(edges, dtype=int).reshape(-1, 2)
    length = float(np.linalg.norm(pts[e[:, 0]] - pts[e[:, 1]], axis=1).sum())
    return LadderTree(m=m, n=n, edges=edges, total_length=length)


def mst_length(terminals) -> float:
    pts = np.asarray(terminals, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("mst_length needs at least two points")
    return float(kernels.mst_length(pts))


def finite_ratio(n: int, params: HelixParams, tol: float = 1e-10, max_iter: int = 100_000) -> float:
    """Optimised 3-sausage length over the exact MST length for ``n`` terminals."""
    tree = optimize_steiner(build_sausage(n, params, "analytic"), tol=tol, max_iter=max_iter)
    return tree.total_length / mst_length(tree.terminals)
