"""Exact Vietoris-Rips persistence of finite metric spaces over GF(2)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from . import _backend
from .circle_pd import CirclePointSet
from .diagrams import PersistenceDiagram

DEFAULT_BUDGET = 50_000_000


class BudgetExceededError(RuntimeError):
    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(f"filtration has at least {count} simplices, budget is {budget}")


@dataclass(frozen=True)
class FiniteMetricSpace:
    dist: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValueError("distances must be finite and non-negative")
        if np.any(np.diag(d) != 0):
            raise ValueError("distance matrix must have a zero diagonal")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def triangle_violation(self) -> float:
        """Largest ``d(i,k) - d(i,j) - d(j,k)``; non-positive for a metric."""
        d = self.dist
        return float(np.max(d[:, None, :] - d[:, :, None] - d.T[None, :, :]))


def _cliques(adj: np.ndarray, k: int, cap: int) -> int:
    """Number of ``k``-cliques, stopping early once ``cap`` is passed."""
    n = adj.shape[0]
    if k == 1:
        return n
    if k == 2:
        return int(adj.sum()) // 2
    if k == 3:
        a = adj.astype(np.float64)
        return int(round(np.trace(a @ a @ a))) // 6
    total = 0
    for i in range(n):
        nb = np.flatnonzero(adj[i, i + 1 :]) + i + 1
        if len(nb) >= k - 1:
            total += _cliques(adj[np.ix_(nb, nb)], k - 1, cap - total)
            if total > cap:
                break
    return total


def simplex_count(space: FiniteMetricSpace, top_dim: int, threshold: float = math.inf, cap: int | None = None) -> int:
    """Simplices of dimension ``<= top_dim`` with diameter ``<= threshold``."""
    n = space.n
    cap = 2**62 if cap is None else cap
    if not math.isfinite(threshold) or threshold >= space.dist.max():
        return sum(comb(n, k) for k in range(1, top_dim + 2))
    adj = space.dist <= threshold
    np.fill_diagonal(adj, False)
    total = 0
    for k in range(1, top_dim + 2):
        total += _cliques(adj, k, cap - total)
        if total > cap:
            break
    return total


def rips_persistence(space: FiniteMetricSpace, max_dim: int, threshold: float = math.inf,
                     budget: int = DEFAULT_BUDGET, pure: bool = False) -> list[PersistenceDiagram]:
    """Diagrams in dimensions ``0..max_dim`` of the Rips filtration up to ``threshold``.

    Classes still alive at the threshold are reported with infinite death.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    count = simplex_count(space, max_dim + 1, threshold, cap=budget)
    if count > budget:
        raise BudgetExceededError(count, budget)
    pairs = _backend.kernels(pure).rips_pairs(space.dist, max_dim, float(threshold))
    return [PersistenceDiagram.from_pairs(d, pairs[d]) for d in range(max_dim + 1)]


def metric_from_circle(ps: CirclePointSet) -> FiniteMetricSpace:
    p = np.asarray(ps.points, dtype=np.float64)
    d = np.abs(p[:, None] - p[None, :])
    return FiniteMetricSpace(np.minimum(d, 1.0 - d))


def metric_from_cloud(points, metric: str = "euclidean") -> FiniteMetricSpace:
    """Pairwise distances of a complex point cloud ``(n, dim)``.

    ``max_factor_chordal`` takes the largest per-coordinate modulus, which on
    a product of circles is the max of the chord lengths.
    """
    x = np.asarray(points)
    if x.ndim != 2:
        raise ValueError("point cloud must be a 2-d array (n, dim)")
    n = x.shape[0]
    out = np.zeros((n, n))
    rows = max(1, 2_000_000 // max(1, n * x.shape[1]))
    for s in range(0, n, rows):
        diff = np.abs(x[s : s + rows, None, :] - x[None, :, :])
        if metric == "euclidean":
            out[s : s + rows] = np.sqrt(np.sum(diff * diff, axis=2))
        elif metric == "max_factor_chordal":
            out[s : s + rows] = diff.max(axis=2)
        else:
            raise ValueError(f"unknown metric {metric!r}")
    out = np.maximum(out, out.T)
    np.fill_diagonal(out, 0.0)
    return FiniteMetricSpace(out)
