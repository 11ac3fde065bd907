import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from spreamble.analytics import (binomial_avg_error, binomial_weights, collision_free_prob,
                                 db_to_linear, qfunction, theta, theta_limit, zc_success_prob)


def test_db_conversion():
    assert db_to_linear(10) == pytest.approx(10.0)
    assert db_to_linear(6) == pytest.approx(10 ** 0.6)
    np.testing.assert_allclose(db_to_linear([0, 20]), [1.0, 100.0])


def test_qfunction_basic():
    assert qfunction(0.0) == 0.5
    assert qfunction(-10.0) == pytest.approx(1.0, abs=1e-15)


def test_qfunction_against_quadrature_quantile():
    # bisection on the integral of the Gaussian density
    def tail(x):
        return integrate.quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), x, np.inf)[0]

    lo, hi = 0.0, 4.0
    for _ in range(80):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if tail(mid) > 0.05 else (lo, mid)
    assert lo == pytest.approx(1.6448536, abs=1e-6)
    assert qfunction(1.6448536) == pytest.approx(0.05, abs=1e-6)


def test_qfunction_accuracy_against_mpmath():
    mpmath.mp.dps = 40
    for x in np.linspace(-8, 8, 161):
        ref = float(mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2)
        assert abs(qfunction(x) - ref) < 1e-12


def test_collision_free_quoted_values():
    # quoted value is truncated, not rounded
    assert math.floor(collision_free_prob(64, 10) * 1000) / 1000 == 0.867
    assert collision_free_prob(2016, 10) == pytest.approx(0.99554, abs=5e-6)
    assert collision_free_prob(7, 1) == 1.0
    with pytest.raises(ValueError):
        collision_free_prob(0, 3)


@given(st.integers(1, 5000), st.integers(1, 200))
@settings(max_examples=200, deadline=None)
def test_collision_free_bound_and_monotonicity(P, K):
    p = collision_free_prob(P, K)
    assert p <= math.exp(-(K - 1) / P) + 1e-15
    assert collision_free_prob(P + 1, K) >= p
    assert collision_free_prob(P, K + 1) <= p


def test_theta_limits():
    assert theta(1e-8, 1, 1) == pytest.approx(0.5e-8, rel=1e-6)
    assert theta_limit(1, 1) == pytest.approx(0.41421356, abs=1e-8)
    assert theta(1e9, 1, 1) == pytest.approx(theta_limit(1, 1), rel=1e-6)
    assert theta(1e9, 3, 2) == pytest.approx(theta_limit(3, 2), rel=1e-6)


@pytest.mark.parametrize("k1", [1, 2, 4])
@pytest.mark.parametrize("k2", [1, 2, 4])
def test_theta_increasing(k1, k2):
    g = np.geomspace(0.01, 100, 2000)
    th = theta(g, k1, k2)
    assert np.all(np.diff(th) > 0)
    assert np.all((th > 0) & (th < 1))


def test_binomial_weights_normalized():
    for Kbar in (0, 1, 5, 20, 31):
        assert binomial_weights(Kbar, 32, 496).sum() == pytest.approx(1.0, abs=1e-12)


def test_binomial_avg_error_against_direct_sum():
    M, snr, L, Q, Kbar = 100, 10.0, 32, 496, 20
    pmf = stats.binom.pmf(np.arange(Kbar + 1), Kbar, (L - 1) / Q)
    direct = sum(pmf[a] * pmf[b] * stats.norm.sf(math.sqrt(2 * M) * theta(snr, a, b))
                 for a in range(Kbar + 1) for b in range(Kbar + 1))
    assert binomial_avg_error(M, snr, L, Q, Kbar) == pytest.approx(direct, rel=1e-10)


def test_binomial_avg_error_bounds():
    with pytest.raises(ValueError):
        binomial_avg_error(100, 10.0, 32, 496, 32)
    for M in (10, 100, 1000):
        for Kbar in (1, 10, 31):
            v = binomial_avg_error(M, 1e6, 32, 496, Kbar)
            assert 0 <= v <= 1
            # the high-SNR margin never exceeds the limit for the smallest counts
            floor = qfunction(math.sqrt(2 * M) * max(theta_limit(a, b) for a in range(Kbar + 1)
                                                      for b in range(Kbar + 1)))
            assert v >= floor * binomial_weights(Kbar, 32, 496)[0] ** 2 - 1e-300


def test_zc_single_device():
    assert zc_success_prob(32, 496, 1, 4.0) == 1.0


def test_zc_fig_value_against_binomial_cdf():
    L, Q, K, omega = 32, 496, 16, 10 ** 0.6
    T = min(math.floor(L / omega), K - 1)
    assert T == 8
    ref = (1 - 1 / Q) ** (K - 1) * stats.binom.cdf(T, K - 1, 1 - L / Q)
    v = zc_success_prob(L, Q, K, omega)
    assert v == pytest.approx(ref, rel=1e-10)
    assert v < 1e-3


def test_zc_large_l_limit():
    K, omega = 20, 10 ** 0.6
    for L in (200, 1000, 5000):
        Q = math.comb(L, 2)
        assert zc_success_prob(L, Q, K, omega) == pytest.approx(collision_free_prob(Q, K), rel=1e-9)
    assert zc_success_prob(5000, math.comb(5000, 2), K, omega) > 0.9999


def test_zc_errors():
    with pytest.raises(ValueError):
        zc_success_prob(8, 8, 3, 1.0)
    with pytest.raises(ValueError):
        zc_success_prob(8, 28, 3, 0.0)


@given(st.integers(4, 64), st.integers(1, 60), st.floats(0.1, 20))
@settings(max_examples=150, deadline=None)
def test_zc_monotone(L, K, omega):
    Q = math.comb(L, 2)
    p = zc_success_prob(L, Q, K, omega)
    assert 0 <= p <= 1
    assert zc_success_prob(L, Q, K, omega * 1.5) <= p + 1e-15
    assert zc_success_prob(L, Q, K + 1, omega) <= p + 1e-15
