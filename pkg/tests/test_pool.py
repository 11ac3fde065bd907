import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spreamble.pool import (UnsupportedOrderError, build_pool, build_transfer_matrix,
                            enumerate_ssets, spreamble_waveform)

# Transfer matrix printed for L = 4, B = 2
PHI_L4 = np.array([
    [1, 1, 1, 0, 0, 0],
    [1, 0, 0, 1, 1, 0],
    [0, 1, 0, 1, 0, 1],
    [0, 0, 1, 0, 1, 1],
])


@pytest.mark.parametrize("N", [2, 3, 4, 7, 16, 32, 64])
def test_pool_orthonormal_and_constant_modulus(N):
    pool = build_pool(N)
    assert pool.C.shape == (N, N) and pool.L == N
    np.testing.assert_allclose(pool.C.conj().T @ pool.C, np.eye(N), atol=1e-10)
    np.testing.assert_allclose(np.abs(pool.C), 1 / np.sqrt(N), atol=1e-12)


def test_pool_small_examples():
    c = build_pool(2).C
    assert abs(np.vdot(c[:, 0], c[:, 1])) < 1e-15
    np.testing.assert_allclose(np.abs(build_pool(32).C), 0.17677669529663687, atol=1e-12)


def test_pool_deterministic_and_readonly():
    a, b = build_pool(8), build_pool(8)
    assert np.array_equal(a.C, b.C)
    with pytest.raises(ValueError):
        a.C[0, 0] = 0


@pytest.mark.parametrize("N", [1, 0, -3, 2.5])
def test_pool_rejects_bad_length(N):
    with pytest.raises(ValueError):
        build_pool(N)


def test_enumerate_l4_b2_matches_listing():
    fam = enumerate_ssets(4, 2)
    one_based = [tuple(i + 1 for i in s) for s in fam.sets]
    assert one_based == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def test_enumerate_b1_is_conventional_pool():
    assert enumerate_ssets(5, 1).sets == ((0,), (1,), (2,), (3,), (4,))


def test_enumerate_count_l64_against_brute_force():
    brute = sum(1 for i in range(64) for j in range(64) if i < j)
    assert brute == 2016
    assert enumerate_ssets(64, 2).Q == brute


def test_enumerate_errors():
    with pytest.raises(UnsupportedOrderError):
        enumerate_ssets(8, 3)
    with pytest.raises(UnsupportedOrderError):
        enumerate_ssets(8, 0)
    with pytest.raises(ValueError):
        enumerate_ssets(1, 2)


def test_transfer_matrix_l4_golden():
    assert np.array_equal(build_transfer_matrix(enumerate_ssets(4, 2)), PHI_L4)


def test_transfer_matrix_b1_identity():
    assert np.array_equal(build_transfer_matrix(enumerate_ssets(3, 1)), np.eye(3))


@pytest.mark.parametrize("L", [4, 8, 16, 32, 64])
def test_transfer_matrix_regularity(L):
    Phi = enumerate_ssets(L, 2).Phi
    assert Phi.shape == (L, math.comb(L, 2))
    assert np.all(Phi.sum(axis=0) == 2)
    assert np.all(Phi.sum(axis=1) == L - 1)
    assert np.unique(Phi.T, axis=0).shape[0] == Phi.shape[1]


@given(st.integers(2, 40))
@settings(max_examples=25, deadline=None)
def test_family_is_lexicographic(L):
    sets = enumerate_ssets(L, 2).sets
    assert all(a < b for a, b in zip(sets, sets[1:]))
    assert all(len(s) == 2 and s[0] < s[1] for s in sets)


def test_spreamble_waveform_examples():
    pool = build_pool(4)
    assert np.array_equal(spreamble_waveform(pool, [0]), pool.C[:, 0])
    s = spreamble_waveform(pool, [0, 1])
    assert np.vdot(s, s).real == pytest.approx(2.0, abs=1e-12)
    assert abs(s @ pool.C[:, 2]) < 1e-12
    with pytest.raises(ValueError):
        spreamble_waveform(pool, [0, 4])


@pytest.mark.parametrize("L", [4, 8, 16])
def test_correlator_selectivity(L):
    pool = build_pool(L)
    fam = enumerate_ssets(L, 2)
    for q, A in enumerate(fam.sets):
        s = spreamble_waveform(pool, A)
        expected = np.isin(np.arange(L), A).astype(float)
        np.testing.assert_allclose(s @ pool.C.conj(), expected, atol=1e-10)
