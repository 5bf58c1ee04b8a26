"""Chordal scaling of circle barcodes and torus-grid diagrams via the persistent Künneth formula."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .circle_pd import circle_diagrams, higher_diagrams, point_set
from .diagrams import INF, PersistenceDiagram

MIN_PERSISTENCE = 1e-12
_HALF_TOL = 1e-12

Interval = tuple[float, float, int]  # [birth, death) with multiplicity


@dataclass(frozen=True)
class ScaledBarcode:
    """Half-open intervals of one homology dimension in chordal units for a circle of ``radius``."""

    dim: int
    intervals: tuple[Interval, ...]
    radius: float

    @classmethod
    def from_flat(cls, dgm: PersistenceDiagram, radius: float) -> "ScaledBarcode":
        ivs = [(*chordal_scale((b, d), radius), m) for b, d, m in dgm.points]
        return cls(dgm.dim, tuple(ivs), float(radius))


@dataclass(frozen=True)
class GridSpec:
    """Product of circle orbits: factor ``j`` has radius ``radii[j]`` and rotation ``omegas[j]``."""

    radii: tuple[float, ...]
    omegas: tuple[float, ...]
    T: int

    def __post_init__(self):
        if len(self.radii) != len(self.omegas) or not self.radii:
            raise ValueError("radii and omegas must be non-empty and of equal length")
        if self.T < 1:
            raise ValueError("T must be >= 1")
        if any(not r > 0 for r in self.radii):
            raise ValueError("radii must be positive")

    @property
    def n_factors(self) -> int:
        return len(self.radii)


def _chord(x: float, radius: float) -> float:
    if math.isinf(x):
        return INF
    if x < 0.0 or x > 0.5 + _HALF_TOL:
        raise ValueError(f"flat length {x!r} outside [0, 1/2]")
    return 2.0 * radius * math.sin(math.pi * min(x, 0.5))


def chordal_scale(interval: tuple[float, float], radius: float) -> tuple[float, float]:
    """Map a flat-circle interval to chord lengths on a circle of the given radius."""
    a, b = interval
    return _chord(a, radius), _chord(b, radius)


def intersect(ivs: Sequence[Interval]) -> Interval | None:
    """Intersection of half-open intervals; ``None`` when empty."""
    lo = max(a for a, _, _ in ivs)
    hi = min(b for _, b, _ in ivs)
    if not lo < hi:
        return None
    m = 1
    for _, _, k in ivs:
        m *= k
    return lo, hi, m


def product_barcode(factor_barcodes: Sequence[Mapping[int, ScaledBarcode]], ell: int) -> list[Interval]:
    """Barcode of the max-metric product in dimension ``ell``.

    All compositions of ``ell`` over the factors are crossed and their
    interval intersections collected; dimensions a factor does not provide
    count as empty.
    """
    counts: Counter = Counter()
    n = len(factor_barcodes)
    for dims in itertools.product(range(ell + 1), repeat=n):
        if sum(dims) != ell:
            continue
        lists = [factor_barcodes[j][dims[j]].intervals if dims[j] in factor_barcodes[j] else () for j in range(n)]
        for combo in itertools.product(*lists):
            iv = intersect(combo)
            if iv is None or iv[1] - iv[0] < MIN_PERSISTENCE:
                continue
            counts[(iv[0], iv[1])] += iv[2]
    return sorted((a, b, m) for (a, b), m in counts.items())


def factor_barcodes(spec: GridSpec, max_dim: int = 1) -> list[dict[int, ScaledBarcode]]:
    """Chordal barcodes of each factor circle in dimensions ``0..max(1, max_dim)``."""
    out = []
    for r, w in zip(spec.radii, spec.omegas):
        ps = point_set(w, spec.T)
        dgms = list(circle_diagrams(w, spec.T))
        dgms += higher_diagrams(w, spec.T, max_dim, ps)
        out.append({d.dim: ScaledBarcode.from_flat(d, r) for d in dgms})
    return out


def grid_diagrams(spec: GridSpec, max_dim: int) -> list[PersistenceDiagram]:
    """Diagrams of the grid under the max metric in dimensions ``0..max_dim``."""
    if max_dim < 0 or max_dim > spec.n_factors:
        raise ValueError(f"max_dim must lie in [0, {spec.n_factors}]")
    bars = factor_barcodes(spec, max_dim)
    return [PersistenceDiagram.from_pairs(ell, product_barcode(bars, ell)) for ell in range(max_dim + 1)]
