"""Brute-force references shared by the test modules."""

from __future__ import annotations

from collections import Counter

import numpy as np

from qpd.circle_pd import point_set
from qpd.diagrams import PersistenceDiagram
from qpd.kunneth import GridSpec
from qpd.rips_oracle import FiniteMetricSpace, metric_from_circle, rips_persistence


def brute_gaps(omega: float, T: int, digits: int = 9) -> Counter:
    pts = np.sort(np.mod(np.arange(T + 1) * omega, 1.0))
    gaps = np.diff(np.append(pts, pts[0] + 1.0))
    return Counter(np.round(gaps, digits).tolist())


def oracle_circle(omega: float, T: int, max_dim: int = 1) -> list[PersistenceDiagram]:
    return rips_persistence(metric_from_circle(point_set(omega, T)), max_dim)


def grid_metric(spec: GridSpec) -> FiniteMetricSpace:
    """Max-of-chords metric on the product of the factor circles."""
    per = []
    for r, w in zip(spec.radii, spec.omegas):
        p = point_set(w, spec.T).points
        d = np.abs(p[:, None] - p[None, :])
        per.append(2.0 * r * np.sin(np.pi * np.minimum(d, 1.0 - d)))
    n = [len(x) for x in per]
    D = per[0]
    for j in range(1, len(per)):
        D = np.maximum(np.kron(D, np.ones((n[j], n[j]))), np.kron(np.ones(D.shape), per[j]))
    np.fill_diagonal(D, 0.0)
    return FiniteMetricSpace(D)


def random_diagram(rng, n: int, dim: int = 1, essential: int = 0) -> PersistenceDiagram:
    b = rng.random(n)
    d = b + rng.random(n) * 0.5 + 1e-3
    pairs = list(zip(b, d)) + [(float(rng.random()), float("inf")) for _ in range(essential)]
    return PersistenceDiagram.from_pairs(dim, pairs)
