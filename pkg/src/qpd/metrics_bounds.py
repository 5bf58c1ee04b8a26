"""Bottleneck distance, the trajectory/grid Hausdorff bound, and error rectangles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import _backend
from .circle_pd import point_set
from .diagrams import INF, PersistenceDiagram, fmt_float
from .kunneth import GridSpec

# ---------------------------------------------------------------- bottleneck


def _split(dgm: PersistenceDiagram) -> tuple[np.ndarray, np.ndarray]:
    pts = dgm.expanded()
    fin = np.array([p for p in pts if math.isfinite(p[1])], dtype=np.float64).reshape(-1, 2)
    ess = np.sort(np.array([p[0] for p in pts if not math.isfinite(p[1])], dtype=np.float64))
    return fin, ess


def _feasible(eps: float, cost: np.ndarray, ha: np.ndarray, hb: np.ndarray) -> bool:
    """Perfect matching with every edge of cost ``<= eps``, diagonal copies included."""
    n, m = cost.shape
    # left: A points then diagonal copies of B; right: B points then diagonal copies of A
    rows, cols = np.nonzero(cost <= eps)
    ia = np.flatnonzero(ha <= eps)
    jb = np.flatnonzero(hb <= eps)
    r = [rows, ia, n + jb, np.repeat(n + np.arange(m), n)]
    c = [cols, m + ia, jb, np.tile(m + np.arange(n), m)]
    size = n + m
    g = csr_matrix((np.ones(sum(len(x) for x in r), dtype=np.int8), (np.concatenate(r), np.concatenate(c))),
                   shape=(size, size))
    match = maximum_bipartite_matching(g, perm_type="column")
    return bool(np.all(match >= 0))


def _finite_bottleneck(a: np.ndarray, b: np.ndarray) -> float:
    ha = 0.5 * (a[:, 1] - a[:, 0])
    hb = 0.5 * (b[:, 1] - b[:, 0])
    if len(a) == 0 and len(b) == 0:
        return 0.0
    cost = np.maximum(np.abs(a[:, None, 0] - b[None, :, 0]), np.abs(a[:, None, 1] - b[None, :, 1]))
    cands = np.unique(np.concatenate((cost.ravel(), ha, hb, [0.0])))
    lo, hi = 0, len(cands) - 1  # the largest candidate is always feasible
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cands[mid], cost, ha, hb):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def bottleneck(dgm1: PersistenceDiagram, dgm2: PersistenceDiagram) -> float:
    """Exact bottleneck distance; ``inf`` when the essential classes cannot be paired."""
    if dgm1.dim != dgm2.dim:
        raise ValueError(f"diagrams of different dimensions ({dgm1.dim} vs {dgm2.dim})")
    fa, ea = _split(dgm1)
    fb, eb = _split(dgm2)
    if len(ea) != len(eb):
        return INF
    # sorted births are an optimal pairing on the line
    ess = float(np.max(np.abs(ea - eb))) if len(ea) else 0.0
    return max(ess, _finite_bottleneck(fa, fb))


# ----------------------------------------------------------------- hausdorff


@dataclass(frozen=True)
class HausdorffResult:
    value: float
    traj_to_grid: float
    grid_to_traj: float
    note: str = "Hausdorff distance in the max metric; an upper bound for the Gromov-Hausdorff distance"


def _flat(trajectory: np.ndarray) -> np.ndarray:
    """Turns of each factor relative to the first point, shape ``(N, T + 1)``."""
    v = np.asarray(trajectory)
    if v.ndim != 2 or len(v) == 0:
        raise ValueError("trajectory must be a non-empty (T + 1, N) array")
    return np.mod(np.angle(v / v[0]) / (2.0 * np.pi), 1.0).T.copy()


def _traj_to_grid(flat: np.ndarray, grids: list[np.ndarray], radii: np.ndarray) -> float:
    # separable: each factor independently picks its nearest grid coordinate
    worst = np.zeros(flat.shape[1])
    for j, g in enumerate(grids):
        ext = np.concatenate((g, g[:1] + 1.0))
        k = np.searchsorted(ext, flat[j])
        lo = ext[np.clip(k - 1, 0, len(ext) - 1)]
        hi = ext[np.clip(k, 0, len(ext) - 1)]
        d = np.minimum(np.abs(flat[j] - lo), np.abs(hi - flat[j]))
        d = np.minimum(d, 1.0 - d)
        np.maximum(worst, 2.0 * radii[j] * np.sin(np.pi * d), out=worst)
    return float(worst.max())


def hausdorff_bound(trajectory: np.ndarray, grid: GridSpec, nthreads: int | None = None) -> HausdorffResult:
    """Hausdorff distance between trajectory points and the grid under the chordal max metric.

    The trajectory is given as complex points ``v_t``, ``t = 0..T``; its first
    point fixes the phase of every factor.
    """
    flat = _flat(trajectory)
    if flat.shape[0] != grid.n_factors:
        raise ValueError(f"trajectory has {flat.shape[0]} factors, grid has {grid.n_factors}")
    radii = np.asarray(grid.radii, dtype=np.float64)
    grids = [point_set(w, grid.T).points for w in grid.omegas]
    fwd = _traj_to_grid(flat, grids, radii)
    nthreads = _backend.threads() if nthreads is None else nthreads
    bwd = float(_backend.KERNELS.grid_to_traj(flat, grids, radii, 0.0, nthreads))
    return HausdorffResult(value=max(fwd, bwd), traj_to_grid=fwd, grid_to_traj=bwd)


# ---------------------------------------------------------------- rectangles


@dataclass(frozen=True)
class ErrorRectangle:
    x0: float
    x1: float
    y0: float
    y1: float
    source_point: tuple[float, float]
    admissible: bool
    ratio: float
    lambda_gh: float
    cond_k: float
    mult: int = 1

    def to_dict(self) -> dict:
        return {
            "x": [fmt_float(self.x0), fmt_float(self.x1)],
            "y": [fmt_float(self.y0), fmt_float(self.y1)],
            "source": [fmt_float(v) for v in self.source_point],
            "admissible": self.admissible,
            "ratio": fmt_float(self.ratio),
            "mult": self.mult,
        }


def error_rectangle(a: float, b: float, lambda_gh: float, cond_k: float, mult: int = 1) -> ErrorRectangle:
    a, b, lam, k = float(a), float(b), float(lambda_gh), float(cond_k)
    x0 = max(0.0, (a - 2 * lam) / k)
    y0 = max(0.0, (b - 2 * lam) / k)
    num, den = b - 2 * lam, a + 2 * lam
    ratio = num / den if den > 0 else (INF if num > 0 else 0.0)
    return ErrorRectangle(
        x0=x0,
        x1=k * (a + 2 * lam),
        y0=y0,
        y1=k * (b + 2 * lam),
        source_point=(a, b),
        admissible=bool(ratio > max(k * k, 1.0)),
        ratio=ratio,
        lambda_gh=lam,
        cond_k=k,
        mult=mult,
    )


def error_rectangles(grid_dgm: PersistenceDiagram, lambda_gh: float, cond_k: float) -> list[ErrorRectangle]:
    """One rectangle per distinct diagram point; inadmissible ones are kept but flagged."""
    if lambda_gh < 0:
        raise ValueError("lambda_gh must be non-negative")
    if cond_k < 1:
        raise ValueError("cond_k must be >= 1")
    return [error_rectangle(a, b, lambda_gh, cond_k, m) for a, b, m in grid_dgm.points]


def contains(rect: ErrorRectangle, point) -> bool:
    a, b = point
    return rect.x0 <= a <= rect.x1 and rect.y0 <= b <= rect.y1
