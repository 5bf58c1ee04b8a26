import math

import numpy as np
import pytest

from helpers import oracle_circle
from qpd._backend import KERNELS
from qpd.circle_pd import (
    THIRD,
    circle_diagrams,
    diameter,
    dgm0_exact,
    dgm1_exact,
    gap_multiset,
    higher_diagrams,
    lambda_death,
    point_set,
)
from qpd.metrics_bounds import bottleneck

W3 = math.sqrt(3) / (2 * math.pi)
W5 = math.sqrt(5) / (2 * math.pi)


def test_point_set_sorted_and_indexed():
    ps = point_set(W3, 50)
    assert np.all(np.diff(ps.points) > 0)
    assert np.allclose(np.mod(ps.index_of * W3, 1.0), ps.points)
    assert ps.gaps().sum() == pytest.approx(1.0)


def test_point_set_coincident_raises():
    with pytest.raises(ValueError):
        point_set(0.25, 8)


@pytest.mark.parametrize("omega,mults", [(W3, [160, 316, 24]), (W5, [161, 220, 119])])
def test_dgm0_multiplicities(omega, mults):
    d0 = dgm0_exact(omega, 500)
    fin = sorted(d0.finite(), key=lambda p: p[1])
    assert sorted(m for _, _, m in fin) == sorted(mults)
    assert sum(m for *_, m in fin) == 500
    assert d0.essential() == [(0.0, math.inf, 1)]


def test_dgm1_lambda_goldens():
    assert dgm1_exact(W3, 500).points[0][1] == pytest.approx(0.334551, abs=5e-6)
    assert dgm1_exact(W5, 500).points[0][1] == pytest.approx(0.334846, abs=5e-6)


def test_two_points_have_no_cycle():
    d0, d1 = circle_diagrams(math.sqrt(5), 1)
    assert len(d1) == 0
    assert len(d0) == 2
    assert lambda_death(math.sqrt(5), 1) == math.inf


def test_gap_multiset_totals():
    gm = gap_multiset(W5, 123)
    assert sum(n for _, n in gm) == 124
    assert sum(g * n for g, n in gm) == pytest.approx(1.0)


def test_diameter_of_half_circle():
    assert diameter(np.array([0.0, 0.25, 0.5])) == pytest.approx(0.5)
    assert diameter(np.array([0.0, 0.1])) == pytest.approx(0.1)


def test_lambda_at_least_a_third():
    rng = np.random.default_rng(7)
    for _ in range(300):
        omega, T = float(rng.uniform(0.01, 0.99)), int(rng.integers(2, 300))
        try:
            ps = point_set(omega, T)
        except ValueError:
            continue
        assert KERNELS.triangle_cover(ps.points) >= THIRD - 1e-12
        # the diameter cap can undercut 1/3 only for sets too clustered to carry a cycle
        for _, death, _ in dgm1_exact(omega, T).points:
            assert death >= THIRD - 1e-12


def test_oracle_equivalence_dims_0_1():
    rng = np.random.default_rng(11)
    done = 0
    while done < 50:
        omega, T = float(rng.uniform(0.01, 0.99)), int(rng.integers(5, 61))
        try:
            d0, d1 = circle_diagrams(omega, T)
        except ValueError:
            continue
        o0, o1 = oracle_circle(omega, T)
        assert bottleneck(d0, o0) <= 1e-12, (omega, T)
        assert bottleneck(d1, o1) <= 1e-12, (omega, T)
        done += 1


def test_higher_dims_match_oracle():
    rng = np.random.default_rng(5)
    done = 0
    while done < 25:
        omega, T = float(rng.uniform(0.01, 0.99)), int(rng.integers(4, 26))
        try:
            hi = higher_diagrams(omega, T, 3)
        except ValueError:
            continue
        oracle = oracle_circle(omega, T, 3)
        for d in hi:
            assert bottleneck(d, oracle[d.dim]) <= 1e-12, (omega, T, d.dim)
        done += 1


def test_higher_dims_exist_for_small_circle():
    # six evenly spread samples carry an octahedral 2-sphere
    hi = higher_diagrams(1 / 6 + 1e-9, 5, 2)
    assert len(hi) == 1 and hi[0].dim == 2
