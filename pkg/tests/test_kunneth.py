import math

import numpy as np
import pytest

from helpers import grid_metric
from qpd.diagrams import INF, PersistenceDiagram
from qpd.kunneth import GridSpec, ScaledBarcode, chordal_scale, grid_diagrams, intersect, product_barcode
from qpd.metrics_bounds import bottleneck
from qpd.rips_oracle import rips_persistence

W3 = math.sqrt(3) / (2 * math.pi)
W5 = math.sqrt(5) / (2 * math.pi)
R = math.sqrt(2) / math.sqrt(2)  # c~ = sqrt(d + 1) / sqrt(2) with d = 1


def test_chordal_scale():
    assert chordal_scale((0.0, 0.5), 1.0) == pytest.approx((0.0, 2.0))
    assert chordal_scale((1 / 6, INF), 2.0) == (pytest.approx(2.0), INF)
    with pytest.raises(ValueError):
        chordal_scale((0.1, 0.6), 1.0)


def test_intersect():
    assert intersect([(0.0, 1.0, 2), (0.5, 2.0, 3)]) == (0.5, 1.0, 6)
    assert intersect([(0.0, 1.0, 1), (1.0, 2.0, 1)]) is None
    assert intersect([(0.2, INF, 1), (0.1, INF, 1)]) == (0.2, INF, 1)


def test_product_of_two_circles_by_hand():
    a = {0: ScaledBarcode(0, ((0.0, INF, 1), (0.0, 0.3, 2)), 1.0), 1: ScaledBarcode(1, ((0.3, 1.5, 1),), 1.0)}
    b = {0: ScaledBarcode(0, ((0.0, INF, 1),), 1.0), 1: ScaledBarcode(1, ((0.4, 1.2, 1),), 1.0)}
    assert product_barcode([a, b], 0) == [(0.0, 0.3, 2), (0.0, INF, 1)]
    assert product_barcode([a, b], 1) == [(0.3, 1.5, 1), (0.4, 1.2, 1)]
    assert product_barcode([a, b], 2) == [(0.4, 1.2, 1)]


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec((1.0,), (0.1, 0.2), 5)
    with pytest.raises(ValueError):
        GridSpec((1.0, -1.0), (0.1, 0.2), 5)
    with pytest.raises(ValueError):
        grid_diagrams(GridSpec((1.0, 1.0), (W3, W5), 10), 3)


def test_golden_grid():
    d = grid_diagrams(GridSpec((R, R), (W3, W5), 500), 2)
    top1 = d[1].most_persistent(2)
    assert sorted(top1) == [pytest.approx((0.01888, 1.73678), abs=5e-4), pytest.approx((0.02296, 1.73586), abs=5e-4)]
    assert d[2].most_persistent(1)[0] == pytest.approx((0.02296, 1.73586), abs=5e-4)


def test_grid_matches_oracle_on_random_grids():
    rng = np.random.default_rng(3)
    done = 0
    while done < 20:
        T = int(rng.integers(3, 10))  # (T + 1)^2 <= 100 points
        spec = GridSpec(tuple(rng.uniform(0.5, 1.5, 2)), tuple(rng.uniform(0.01, 0.99, 2)), T)
        try:
            ours = grid_diagrams(spec, 2)
        except ValueError:
            continue
        oracle = rips_persistence(grid_metric(spec), 2)
        for a, b in zip(ours, oracle):
            assert bottleneck(a, b) <= 1e-12, (spec, a.dim)
        done += 1


def test_single_factor_is_the_scaled_circle():
    spec = GridSpec((2.0,), (W5,), 30)
    d0, d1 = grid_diagrams(spec, 1)
    assert isinstance(d1, PersistenceDiagram) and len(d1) == 1
    assert d0.essential() == [(0.0, INF, 1)]
