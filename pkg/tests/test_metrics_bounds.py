import itertools
import math

import numpy as np
import pytest

from helpers import random_diagram
from qpd import _fallback
from qpd._backend import KERNELS
from qpd.circle_pd import point_set
from qpd.diagrams import INF, PersistenceDiagram
from qpd.kunneth import GridSpec
from qpd.metrics_bounds import bottleneck, contains, error_rectangle, error_rectangles, hausdorff_bound
from qpd.rips_oracle import metric_from_cloud, rips_persistence
from qpd.sliding_window import ExponentialSum, trajectory

W3 = math.sqrt(3) / (2 * math.pi)
W5 = math.sqrt(5) / (2 * math.pi)
K = math.sqrt(2)


def brute_bottleneck(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    """Minimum over all bijections of the augmented point lists (finite points only)."""
    A, B = [p for p in a.expanded()], [p for p in b.expanded()]
    diag = lambda p: ("diag", p)  # noqa: E731
    left = A + [diag(q) for q in B]
    right = B + [diag(p) for p in A]

    def cost(x, y):
        if x[0] == "diag" and y[0] == "diag":
            return 0.0
        if x[0] == "diag":
            return (y[1] - y[0]) / 2
        if y[0] == "diag":
            return (x[1] - x[0]) / 2
        return max(abs(x[0] - y[0]), abs(x[1] - y[1]))

    return min(max((cost(x, y) for x, y in zip(left, perm)), default=0.0) for perm in itertools.permutations(right))


def test_bottleneck_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(40):
        a = random_diagram(rng, int(rng.integers(0, 4)))
        b = random_diagram(rng, int(rng.integers(0, 4)))
        assert bottleneck(a, b) == pytest.approx(brute_bottleneck(a, b), abs=1e-12)


def test_bottleneck_axioms():
    rng = np.random.default_rng(1)
    for _ in range(60):
        a, b, c = (random_diagram(rng, int(rng.integers(0, 9)), essential=1) for _ in range(3))
        assert bottleneck(a, a) == 0.0
        assert bottleneck(a, b) == pytest.approx(bottleneck(b, a), abs=1e-12)
        assert bottleneck(a, c) <= bottleneck(a, b) + bottleneck(b, c) + 1e-12
        if bottleneck(a, b) <= 1e-12:
            assert sorted(a.expanded()) == pytest.approx(sorted(b.expanded()), abs=1e-12)


def test_bottleneck_essential_classes():
    a = PersistenceDiagram.from_pairs(0, [(0.0, INF), (0.0, 1.0)])
    b = PersistenceDiagram.from_pairs(0, [(0.2, INF)])
    assert bottleneck(a, b) == pytest.approx(0.5)
    c = PersistenceDiagram.from_pairs(0, [(0.0, INF), (0.0, INF)])
    assert bottleneck(a, c) == INF
    with pytest.raises(ValueError):
        bottleneck(a, PersistenceDiagram(1))


def test_stability_under_perturbation():
    rng = np.random.default_rng(2)
    for trial in range(20):
        eta = (1e-3, 1e-2)[trial % 2]
        n = int(rng.integers(4, 13))
        X = rng.random((n, 2))
        step = rng.normal(size=(n, 2))
        step *= (eta / 2) / np.linalg.norm(step, axis=1, keepdims=True)  # every distance moves by <= eta
        a = rips_persistence(metric_from_cloud(X.astype(complex)), 1)
        b = rips_persistence(metric_from_cloud((X + step).astype(complex)), 1)
        for da, db in zip(a, b):
            assert bottleneck(da, db) <= 2 * eta + 1e-12


def _brute_hausdorff(V, spec):
    flat = np.mod(np.angle(V / V[0]) / (2 * np.pi), 1.0)
    grids = [point_set(w, spec.T).points for w in spec.omegas]
    G = np.array(list(itertools.product(*grids)))
    diff = np.abs(flat[:, None, :] - G[None, :, :])
    chord = 2 * np.asarray(spec.radii) * np.sin(np.pi * np.minimum(diff, 1 - diff))
    D = chord.max(axis=2)
    return D.min(axis=1).max(), D.min(axis=0).max()


def test_hausdorff_brute_force_small():
    f = ExponentialSum((0.7, 1.2j), (W3, W5))
    V = trajectory(f, 40, 1)
    spec = GridSpec(tuple(np.abs(V[0])), (W3, W5), 10)
    fwd, bwd = _brute_hausdorff(V, spec)
    h = hausdorff_bound(V, spec)
    assert h.traj_to_grid == pytest.approx(fwd, abs=1e-12)
    assert h.grid_to_traj == pytest.approx(bwd, abs=1e-12)
    assert h.value == pytest.approx(max(fwd, bwd), abs=1e-12)


def test_hausdorff_of_circle_with_itself_is_zero():
    f = ExponentialSum((1.0,), (W5,))
    V = trajectory(f, 60, 1)
    spec = GridSpec((float(abs(V[0, 0])),), (W5,), 60)
    assert hausdorff_bound(V, spec).value == pytest.approx(0.0, abs=1e-12)


def test_hausdorff_schedule_independent():
    f = ExponentialSum((1.0, 1.0), (W3, W5))
    V = trajectory(f, 900, 1)
    spec = GridSpec((math.sqrt(2), math.sqrt(2)), (W3, W5), 120)
    vals = {hausdorff_bound(V, spec, nthreads=t).value for t in (1, 2, 5)}
    assert len(vals) == 1


def test_hausdorff_kernels_agree():
    rng = np.random.default_rng(9)
    for _ in range(30):
        N = int(rng.integers(1, 4))
        traj = rng.random((N, int(rng.integers(1, 80))))
        grids = [np.sort(rng.random(int(rng.integers(1, 9)))) for _ in range(N)]
        radii = rng.uniform(0.2, 2.0, N)
        assert KERNELS.grid_to_traj(traj, grids, radii, 0.0, 1) == pytest.approx(
            _fallback.grid_to_traj(traj, grids, radii, 0.0, 1), abs=1e-14)


def test_rectangle_goldens():
    r1 = error_rectangle(0.02296, 1.73586, 0.20975, K)
    assert (r1.x0, r1.x1, r1.y0, r1.y1) == pytest.approx((0, 0.6257, 0.9308, 3.0481), abs=1e-3)
    assert r1.ratio == pytest.approx(2.9751, abs=1e-3)
    r2 = error_rectangle(0.01888, 1.73678, 0.20975, K)
    assert (r2.x0, r2.x1, r2.y0, r2.y1) == pytest.approx((0, 0.6200, 0.9315, 3.0494), abs=1e-3)
    assert r2.ratio == pytest.approx(3.0049, abs=1e-3)
    assert r1.admissible and r2.admissible


def test_rectangle_flags_and_validation():
    r = error_rectangle(0.5, 0.6, 0.2, 1.0)
    assert not r.admissible and r.ratio < 1
    d = PersistenceDiagram.from_pairs(1, [(0.1, 1.0), (0.2, 0.3)])
    assert len(error_rectangles(d, 0.01, 1.0)) == 2
    with pytest.raises(ValueError):
        error_rectangles(d, -1.0, 1.0)
    with pytest.raises(ValueError):
        error_rectangles(d, 0.1, 0.5)
    assert r.to_dict()["admissible"] is False


def test_contains():
    r = error_rectangle(0.02296, 1.73586, 0.20975, K)
    assert contains(r, (0.193, 1.771))
    assert contains(r, (r.x1, r.y1))
    assert not contains(r, (0.7, 2.0))


def test_hausdorff_full_scale_against_kdtree():
    # equal radii: the max of chords is the chord of the max flat offset, so a
    # periodic KD-tree in flat coordinates gives an independent value
    from scipy.spatial import cKDTree

    f = ExponentialSum((1 / math.sqrt(2),) * 2, (W3, W5))
    spec = GridSpec((1.0, 1.0), (W3, W5), 500)
    t = np.arange(2001)
    P = np.stack([np.mod(t * W3, 1.0), np.mod(t * W5, 1.0)], 1)
    G = np.array(list(itertools.product(*(point_set(w, 500).points for w in (W3, W5)))))
    fwd = cKDTree(G, boxsize=1.0).query(P, p=np.inf)[0].max()
    bwd = cKDTree(P, boxsize=1.0).query(G, p=np.inf)[0].max()
    h = hausdorff_bound(trajectory(f, 2000, 1), spec)
    assert h.traj_to_grid == pytest.approx(2 * math.sin(math.pi * fwd), abs=1e-9)
    assert h.grid_to_traj == pytest.approx(2 * math.sin(math.pi * bwd), abs=1e-9)
