import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_gaps
from qpd.numtheory import InsufficientIrrationalityError, cfe, convergents, three_gap

SQRT5 = math.sqrt(5.0)


def test_cfe_pi_minus_one():
    cf = cfe(math.pi - 1.0)
    assert cf.coeffs[:7] == (2, 7, 15, 1, 292, 1, 1)
    assert [cf.q(i) for i in range(1, 5)] == [1, 7, 106, 113]


def test_cfe_golden_ratio_is_all_ones():
    cf = cfe((1 + SQRT5) / 2, max_terms=30)
    assert set(cf.coeffs) == {1}


def test_cfe_rational_terminates():
    cf = cfe(0.375)
    assert cf.terminated and cf.coeffs == (0, 2, 1, 2)
    assert (cf.p(len(cf)), cf.q(len(cf))) == (3, 8)


def test_cfe_rejects_non_finite():
    with pytest.raises(ValueError):
        cfe(float("nan"))


@pytest.mark.parametrize("x", [math.pi - 1, math.sqrt(2), math.e, SQRT5 % 1, math.sqrt(3) / (2 * math.pi)])
def test_convergent_identities(x):
    cf = cfe(x)
    exact = Fraction(x)
    for i in range(1, min(len(cf), 12)):
        p, q, p1, q1 = cf.p(i), cf.q(i), cf.p(i - 1), cf.q(i - 1)
        assert p * q1 - p1 * q == (-1) ** i
        assert abs(exact - Fraction(p, q)) < Fraction(1, q * q)
        assert math.isclose(cf.D(i), float(q * exact - p), abs_tol=1e-15)
    assert convergents(cf, 6) == list(cf.convergents[:8])


def test_three_gap_sqrt5_golden():
    gs = three_gap(SQRT5, 16)
    assert (gs.n_a, gs.n_b, gs.n_c) == (13, 4, 0)
    assert gs.delta_a == pytest.approx(0.05573, abs=5e-5)
    assert gs.delta_b == pytest.approx(0.06888, abs=5e-5)


def test_three_gap_pi_minus_one_golden():
    gs = three_gap(math.pi - 1, 16)
    assert (gs.n_a, gs.n_b, gs.n_c) == (10, 2, 5)
    assert (gs.delta_a, gs.delta_b, gs.delta_c) == pytest.approx((0.00885, 0.12389, 0.13274), abs=5e-5)


def test_three_gap_rational_raises():
    with pytest.raises(InsufficientIrrationalityError):
        three_gap(0.25, 10)
    with pytest.raises(ValueError):
        three_gap(SQRT5, 0)


def _matches_brute(omega, T):
    gs = three_gap(omega, T)
    got = {}
    for g, n in gs.gaps():
        key = round(g, 9)
        got[key] = got.get(key, 0) + n
    return got == dict(brute_gaps(omega, T)), gs


def test_gap_bruteforce_200():
    rng = np.random.default_rng(1)
    for _ in range(200):
        omega = float(rng.uniform(0.01, 0.99))
        T = int(rng.integers(1, 400))
        ok, gs = _matches_brute(omega, T)
        assert ok, (omega, T, gs)
        assert gs.n_a + gs.n_b + gs.n_c == T + 1
        assert gs.delta_c == pytest.approx(gs.delta_a + gs.delta_b, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.001, 0.999), st.integers(1, 300))
def test_gap_property(omega, T):
    try:
        ok, _ = _matches_brute(omega, T)
    except InsufficientIrrationalityError:
        return
    assert ok
