"""Pure-Python/numpy implementations of the hot kernels.

Same contracts as the compiled ``_kernels`` module. The Rips reduction here is
deliberately a different algorithm (explicit boundary matrix, homology, twist)
from the compiled one (implicit coboundary, cohomology) so the two can be
checked against each other.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

def _circ(delta: np.ndarray) -> np.ndarray:
    a = np.abs(delta)
    return np.minimum(a, 1.0 - a)


def triangle_cover(pts: np.ndarray) -> float:
    """Smallest ``r`` such that three of the sorted points cut the circle into arcs all ``<= r``.

    For a fixed first arc ``[p_i, p_j]`` the best third point is the one nearest
    the midpoint of the remaining arc, so only its two neighbours are tried.
    """
    p = np.ascontiguousarray(pts, dtype=np.float64)
    n = p.shape[0]
    best = math.inf
    for i in range(n - 2):
        j = np.arange(i + 1, n - 1)
        a = p[j] - p[i]
        target = 0.5 * (p[i] + 1.0 + p[j])
        lo = np.searchsorted(p, target)
        for k in (lo - 1, lo):
            ok = (k > j) & (k < n)
            if not ok.any():
                continue
            kk = k[ok]
            arc = np.maximum.reduce([a[ok], p[kk] - p[j[ok]], 1.0 - (p[kk] - p[i])])
            best = min(best, float(arc.min()))
    return best


def grid_to_traj(traj: np.ndarray, grids: list, radii: np.ndarray, h0: float = 0.0, nthreads: int = 1) -> float:
    """Directed Hausdorff distance from a product grid to a trajectory.

    ``traj`` is ``(N, m)`` flat coordinates; ``grids[j]`` the flat coordinates of
    factor ``j``. Distances are max over factors of ``2 r_j sin(pi * flat)``.
    """
    traj = np.asarray(traj, dtype=np.float64)
    N = traj.shape[0]
    chords = [
        2.0 * radii[j] * np.sin(np.pi * _circ(np.asarray(grids[j])[:, None] - traj[j][None, :]))
        for j in range(N)
    ]
    best = float(h0)
    last = chords[-1]
    for idx in itertools.product(*(range(len(g)) for g in grids[:-1])):
        acc = np.zeros(traj.shape[1])
        for j, s in enumerate(idx):
            np.maximum(acc, chords[j][s], out=acc)
        vals = np.maximum(acc[None, :], last).min(axis=1)
        best = max(best, float(vals.max()))
    return best


def _enumerate_cliques(dist: np.ndarray, top_dim: int, threshold: float):
    n = dist.shape[0]
    simplices = [((v,), 0.0) for v in range(n)]
    level = list(simplices)
    for _ in range(top_dim):
        nxt = []
        for verts, val in level:
            for w in range(verts[-1] + 1, n):
                m = max(dist[u, w] for u in verts)
                if m <= threshold:
                    nxt.append((verts + (w,), max(val, m)))
        simplices.extend(nxt)
        level = nxt
    return simplices


def rips_pairs(dist: np.ndarray, max_dim: int, threshold: float = math.inf):
    """Persistence pairs ``[(birth, death), ...]`` per dimension ``0..max_dim`` over GF(2)."""
    dist = np.asarray(dist, dtype=np.float64)
    simplices = _enumerate_cliques(dist, max_dim + 1, threshold)
    simplices.sort(key=lambda s: (s[1], len(s[0]), s[0]))
    index = {verts: i for i, (verts, _) in enumerate(simplices)}
    values = [v for _, v in simplices]
    dims = [len(s) - 1 for s, _ in simplices]

    # boundary columns as integer bitmasks over global simplex indices
    columns: list[int] = [0] * len(simplices)
    for i, (verts, _) in enumerate(simplices):
        if len(verts) > 1:
            col = 0
            for k in range(len(verts)):
                col |= 1 << index[verts[:k] + verts[k + 1 :]]
            columns[i] = col

    by_dim: dict[int, list[int]] = {}
    for i, d in enumerate(dims):
        by_dim.setdefault(d, []).append(i)

    low_owner: dict[int, int] = {}
    is_low = [False] * len(simplices)
    for d in range(max_dim + 1, 0, -1):
        for j in by_dim.get(d, []):
            if is_low[j]:
                columns[j] = 0  # clearing: a positive simplex has a zero reduced column
                continue
            col = columns[j]
            while col:
                low = col.bit_length() - 1
                owner = low_owner.get(low)
                if owner is None:
                    break
                col ^= columns[owner]
            columns[j] = col
            if col:
                low = col.bit_length() - 1
                low_owner[low] = j
                is_low[low] = True

    out: list[list[tuple[float, float]]] = [[] for _ in range(max_dim + 1)]
    for low, j in low_owner.items():
        d = dims[low]
        if d <= max_dim:
            out[d].append((values[low], values[j]))
    for i, d in enumerate(dims):
        if d <= max_dim and not is_low[i] and columns[i] == 0:
            out[d].append((values[i], math.inf))
    return out
