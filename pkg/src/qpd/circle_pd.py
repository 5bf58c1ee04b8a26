"""Exact Rips diagrams (dims 0 and 1) of rotation orbits on the flat circle."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _backend
from .diagrams import INF, PersistenceDiagram
from .numtheory import GapStructure, three_gap

THIRD = 1.0 / 3.0
TIE_ROUND = 12  # decimal places used to merge equal gap lengths
LAMBDA_EPS = 1e-12
MIN_PERSISTENCE = 1e-12


@dataclass(frozen=True)
class CirclePointSet:
    """``{t * omega mod 1 : t = 0..T}`` as sorted flat coordinates.

    ``index_of[i]`` is the time index ``t`` of ``points[i]``.
    """

    omega: float
    T: int
    points: np.ndarray
    index_of: np.ndarray

    def __len__(self) -> int:
        return len(self.points)

    def gaps(self) -> np.ndarray:
        """Circular adjacent differences, ``gaps[i]`` following ``points[i]``."""
        p = self.points
        return np.diff(np.append(p, p[0] + 1.0))


def point_set(omega: float, T: int) -> CirclePointSet:
    if T < 0:
        raise ValueError("T must be >= 0")
    w = float(omega) % 1.0
    t = np.arange(T + 1)
    flat = np.mod(t * w, 1.0)
    order = np.argsort(flat, kind="stable")
    pts = flat[order]
    if len(pts) > 1 and np.any(np.diff(pts) <= 0.0):
        raise ValueError(f"omega={omega!r} produces coincident points for T={T}")
    return CirclePointSet(omega=w, T=int(T), points=pts, index_of=order)


def _merge(pairs) -> list[tuple[float, int]]:
    """Merge gap lengths equal after rounding; keeps the first-seen representative."""
    rep: dict[float, float] = {}
    counts: Counter = Counter()
    for g, n in pairs:
        key = round(g, TIE_ROUND)
        rep.setdefault(key, g)
        counts[key] += n
    return sorted((rep[k], n) for k, n in counts.items() if n > 0)


def gap_multiset(omega: float, T: int, gs: GapStructure | None = None) -> list[tuple[float, int]]:
    """Distinct gap lengths of the orbit with their multiplicities."""
    if gs is None:
        gs = three_gap(omega, T)
    return _merge(gs.gaps())


def dgm0_exact(omega: float, T: int, gs: GapStructure | None = None) -> PersistenceDiagram:
    """Dimension-0 diagram: every gap but one copy of the largest dies, one class lives forever."""
    gaps = gap_multiset(omega, T, gs)
    g_max, n_max = gaps[-1]
    gaps[-1] = (g_max, n_max - 1)
    pairs = [(0.0, g, n) for g, n in gaps if n > 0]
    pairs.append((0.0, INF, 1))
    return PersistenceDiagram.from_pairs(0, pairs)


def diameter(points: np.ndarray) -> float:
    """Largest circle distance among sorted flat coordinates."""
    p = np.asarray(points, dtype=np.float64)
    if len(p) < 2:
        return 0.0
    ext = np.concatenate((p, p + 1.0))
    k = np.searchsorted(ext, p + 0.5)
    best = 0.0
    for kk in (k - 1, k):
        d = np.abs(ext[np.clip(kk, 0, len(ext) - 1)] - p)
        best = max(best, float(np.minimum(d, 1.0 - d).max()))
    return best


def lambda_death(omega: float, T: int, ps: CirclePointSet | None = None) -> float:
    """Death of the orbit's 1-cycle, ``inf`` when no pair qualifies.

    A pair ``x < y`` at distance ``d`` qualifies when some sample on the
    complementary arc sits within arc length ``d`` of both ends, so the three
    points cut the circle into arcs no longer than ``d``. Past the diameter the
    complex is a full simplex, which caps the value.
    """
    if ps is None:
        ps = point_set(omega, T)
    if len(ps) < 3:
        return INF
    lam = float(_backend.KERNELS.triangle_cover(ps.points))
    # three arcs summing to one cannot all be shorter than 1/3
    assert lam >= THIRD - LAMBDA_EPS, f"witnessed pair distance {lam} below 1/3"
    return min(lam, diameter(ps.points))


def dgm1_exact(omega: float, T: int, gs: GapStructure | None = None, lam: float | None = None) -> PersistenceDiagram:
    """Dimension-1 diagram: one point born at the largest gap and dying at lambda, or nothing."""
    if T < 2:
        return PersistenceDiagram(1, ())
    if gs is None:
        gs = three_gap(omega, T)
    d_max = gs.max_gap
    if lam is None:
        lam = lambda_death(omega, T)
    # the largest gap and lambda can be the same arc computed two ways
    if not lam - d_max > LAMBDA_EPS:
        return PersistenceDiagram(1, ())
    return PersistenceDiagram.from_pairs(1, [(d_max, lam)])


def circle_diagrams(omega: float, T: int) -> tuple[PersistenceDiagram, PersistenceDiagram]:
    gs = three_gap(omega, T)
    return dgm0_exact(omega, T, gs), dgm1_exact(omega, T, gs)


def _reach(doff: np.ndarray, r: float) -> np.ndarray:
    """Counter-clockwise reach: how many successive neighbours lie within ``r``."""
    over = doff > r
    a = np.argmax(over, axis=1)
    a[~over.any(axis=1)] = doff.shape[1]
    return a


def _orbits(reach: np.ndarray) -> tuple[Fraction, int]:
    """Winding fraction and number of periodic orbits of ``i -> i + reach[i]``."""
    n = len(reach)
    step = (np.arange(n) + reach) % n
    # n applications land every start on a cycle
    x = np.arange(n)
    g = step.copy()
    k = n
    while k:
        if k & 1:
            x = g[x]
        g = g[g]
        k >>= 1
    on_cycle = np.zeros(n, dtype=bool)
    on_cycle[np.unique(x)] = True
    seen = np.zeros(n, dtype=bool)
    cycles = 0
    wf = None
    for s in np.flatnonzero(on_cycle):
        if seen[s]:
            continue
        cycles += 1
        i, length, shift = s, 0, 0
        while not seen[i]:
            seen[i] = True
            shift += int(reach[i])
            length += 1
            i = step[i]
        if wf is None:
            wf = Fraction(shift // n, length)
    return wf, cycles


def _type_at(wf: Fraction, cycles: int) -> tuple[int, int]:
    """Homotopy type as ``(dim, rank)``: a wedge of ``rank`` spheres of dimension ``dim``."""
    # wf = l/(2l+1) gives a wedge of 2l-spheres, values strictly between two
    # such levels a single (2l+1)-sphere
    level = wf / (1 - 2 * wf)
    if level.denominator == 1:
        return 2 * int(level), cycles - 1
    return 2 * math.floor(level) + 1, 1


def higher_diagrams(omega: float, T: int, max_dim: int, ps: CirclePointSet | None = None) -> list[PersistenceDiagram]:
    """Diagrams in dimensions ``2..max_dim`` from the winding of the reach map.

    At each scale the complex of a finite circle sample is a single odd sphere
    or a wedge of even spheres, fixed by the winding fraction of the map that
    sends a point to its furthest counter-clockwise neighbour within range.
    Inside a wedge window the rank is one less than the number of periodic
    orbits; changes in that count are read as births and deaths under the
    elder rule. Odd spheres persist until the winding moves on.
    """
    if ps is None:
        ps = point_set(omega, T)
    out = {d: [] for d in range(2, max_dim + 1)}
    n = len(ps)
    if max_dim < 2 or n < 3:
        return [PersistenceDiagram(d, ()) for d in range(2, max_dim + 1)]
    p = ps.points
    idx = (np.arange(n)[:, None] + np.arange(1, n)[None, :]) % n
    delta = np.abs(p[idx] - p[:, None])
    doff = np.minimum(delta, 1.0 - delta)
    diam = float(doff.max())
    lam = lambda_death(omega, T, ps)
    values = np.unique(doff)
    values = values[(values >= lam - LAMBDA_EPS) & (values < diam - LAMBDA_EPS)]
    # equal distances recomputed from different pairs differ by rounding noise;
    # evaluate each cluster at its top and report it by its bottom
    if len(values):
        starts = np.flatnonzero(np.diff(values, prepend=-np.inf) > LAMBDA_EPS)
        ends = np.append(starts[1:], len(values)) - 1
        clusters = list(zip(values[starts], values[ends]))
    else:
        clusters = []

    open_bars: list[float] = []  # births of live classes in the current dimension
    cur_dim = None
    for r, r_top in clusters:
        reach = _reach(doff, float(r_top))
        if reach.max() == n - 1:
            # a vertex adjacent to all others makes the complex a cone
            break
        dim, rank = _type_at(*_orbits(reach))
        if dim != cur_dim:
            if cur_dim is not None and cur_dim in out:
                out[cur_dim].extend((b, float(r)) for b in open_bars)
            cur_dim = dim
            open_bars = [float(r)] * rank
        elif len(open_bars) > rank:
            # elder rule: the youngest classes die first
            if dim in out:
                out[dim].extend((b, float(r)) for b in open_bars[rank:])
            del open_bars[rank:]
        else:
            open_bars.extend([float(r)] * (rank - len(open_bars)))
        if cur_dim > max_dim:
            break
    else:
        r = diam
    if cur_dim is not None and cur_dim in out:
        out[cur_dim].extend((b, float(r)) for b in open_bars)
    return [PersistenceDiagram.from_pairs(d, out[d], MIN_PERSISTENCE) for d in range(2, max_dim + 1)]
