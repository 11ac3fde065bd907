"""Hot per-trial kernels with a numba path and a pure-numpy path.

The numba versions are used when numba imports cleanly, unless the
environment variable ``SPREAMBLE_DISABLE_NUMBA`` is set to a non-empty
value other than ``0``. Both paths compute the same quantities; the
numpy path is also always importable as ``*_numpy`` for cross-checks.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = ["BACKEND", "pair_test", "conjugate_sinr",
           "pair_test_numpy", "conjugate_sinr_numpy"]


def pair_test_numpy(G, pairs, kappa, P_rx, N0):
    """Correlation test for every 2-subset in ``pairs``.

    Returns ``(y1, tau, used)``. Pairs with a zero component count are
    skipped: ``y1`` and ``tau`` are NaN there and ``used`` is False.
    """
    M = G.shape[0]
    Q = pairs.shape[0]
    y1 = np.full(Q, np.nan)
    tau = np.full(Q, np.nan)
    used = np.zeros(Q, dtype=np.bool_)
    k1 = kappa[pairs[:, 0]]
    k2 = kappa[pairs[:, 1]]
    active = (k1 > 0) & (k2 > 0)
    if not active.any():
        return y1, tau, used
    a = pairs[active, 0]
    b = pairs[active, 1]
    # Re(g_a^H g_b) summed over antennas
    re = np.einsum("ij,ij->j", G[:, a].real, G[:, b].real) \
        + np.einsum("ij,ij->j", G[:, a].imag, G[:, b].imag)
    y = math.sqrt(2.0) * re / math.sqrt(M)
    g = P_rx / N0
    t = N0 * math.sqrt(2.0 * M) * g / (
        1.0 + np.sqrt(1.0 + g * g / ((1.0 + k1[active] * g) * (1.0 + k2[active] * g))))
    y1[active] = y
    tau[active] = t
    used[active] = y > t
    return y1, tau, used


def conjugate_sinr_numpy(W, V, target, P, N0):
    """Post-beamforming SINR of device ``target[j]`` using beam ``W[:, j]``.

    ``SINR = P|w^H v_t|^2 / (P sum_{k != t} |w^H v_k|^2 + N0 ||w||^2)``;
    an all-zero beam yields 0.
    """
    J = W.shape[1]
    out = np.zeros(J)
    if J == 0:
        return out
    C = W.conj().T @ V
    power = C.real ** 2 + C.imag ** 2
    rows = np.arange(J)
    signal = P * power[rows, target]
    interference = P * (power.sum(axis=1) - power[rows, target])
    noise = N0 * np.einsum("ij,ij->j", W.real, W.real) + N0 * np.einsum("ij,ij->j", W.imag, W.imag)
    den = interference + noise
    ok = den > 0
    out[ok] = signal[ok] / den[ok]
    return out


def _numba_disabled() -> bool:
    flag = os.environ.get("SPREAMBLE_DISABLE_NUMBA", "")
    return flag not in ("", "0")


try:
    if _numba_disabled():
        raise ImportError("numba disabled by SPREAMBLE_DISABLE_NUMBA")
    from numba import njit
except ImportError:
    njit = None


if njit is not None:

    @njit(cache=True)
    def pair_test_numba(G, pairs, kappa, P_rx, N0):
        M, _ = G.shape
        Q = pairs.shape[0]
        y1 = np.full(Q, np.nan)
        tau = np.full(Q, np.nan)
        used = np.zeros(Q, dtype=np.bool_)
        g = P_rx / N0
        scale = math.sqrt(2.0) / math.sqrt(M)
        root2m = math.sqrt(2.0 * M)
        for q in range(Q):
            a = pairs[q, 0]
            b = pairs[q, 1]
            k1 = kappa[a]
            k2 = kappa[b]
            if k1 == 0 or k2 == 0:
                continue
            acc = 0.0
            for m in range(M):
                x = G[m, a]
                y = G[m, b]
                acc += x.real * y.real + x.imag * y.imag
            y1[q] = scale * acc
            tau[q] = N0 * root2m * g / (1.0 + math.sqrt(1.0 + g * g / ((1.0 + k1 * g) * (1.0 + k2 * g))))
            used[q] = y1[q] > tau[q]
        return y1, tau, used

    @njit(cache=True)
    def conjugate_sinr_numba(W, V, target, P, N0):
        M, J = W.shape
        K = V.shape[1]
        out = np.zeros(J)
        for j in range(J):
            t = target[j]
            signal = 0.0
            interference = 0.0
            for k in range(K):
                acc = 0.0 + 0.0j
                for m in range(M):
                    acc += W[m, j].conjugate() * V[m, k]
                p = acc.real * acc.real + acc.imag * acc.imag
                if k == t:
                    signal = P * p
                else:
                    interference += P * p
            norm2 = 0.0
            for m in range(M):
                w = W[m, j]
                norm2 += w.real * w.real + w.imag * w.imag
            den = interference + N0 * norm2
            if den > 0.0:
                out[j] = signal / den
        return out

    BACKEND = "numba"
    pair_test = pair_test_numba
    conjugate_sinr = conjugate_sinr_numba
else:
    BACKEND = "numpy"
    pair_test = pair_test_numpy
    conjugate_sinr = conjugate_sinr_numpy
