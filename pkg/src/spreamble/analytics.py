"""Closed-form probabilities used as baselines and overlays."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc

__all__ = [
    "db_to_linear",
    "qfunction",
    "collision_free_prob",
    "theta",
    "theta_limit",
    "binomial_weights",
    "binomial_avg_error",
    "zc_success_prob",
]


def db_to_linear(x_db):
    out = 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)
    return float(out) if np.ndim(out) == 0 else out


def qfunction(x):
    """Standard Gaussian upper tail ``Q(x) = P(Z > x)``."""
    out = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


def collision_free_prob(pool_size: int, K: int) -> float:
    """Probability that a given device shares its (S-)preamble with nobody.

    ``pool_size`` is ``L`` for ordinary preambles and ``Q`` for S-preambles.
    """
    if pool_size < 1 or K < 1:
        raise ValueError(f"need pool_size >= 1 and K >= 1, got {pool_size}, {K}")
    return (1.0 - 1.0 / pool_size) ** (K - 1)


def theta(snr, kappa1, kappa2):
    """Normalized detection margin; ``P_FA = P_MD = Q(sqrt(2M) * theta)``.

    Uses ``kappa(snr) = sqrt((1 + kappa1*snr)(1 + kappa2*snr))``.
    """
    snr = np.asarray(snr, dtype=float)
    kap = np.sqrt((1.0 + kappa1 * snr) * (1.0 + kappa2 * snr))
    out = snr / (kap + np.sqrt(snr * snr + kap * kap))
    return float(out) if np.ndim(out) == 0 else out


def theta_limit(kappa1, kappa2) -> float:
    """High-SNR limit of :func:`theta`."""
    kk = kappa1 * kappa2
    return 1.0 / (math.sqrt(kk) + math.sqrt(1.0 + kk))


def binomial_weights(Kbar: int, L: int, Q: int) -> np.ndarray:
    """``p_k = P(kappa = k)`` for ``kappa ~ Bin(Kbar, (L-1)/Q)``, ``k = 0..Kbar``."""
    p = (L - 1) / Q
    k = np.arange(Kbar + 1)
    comb = np.array([math.comb(Kbar, int(i)) for i in k], dtype=float)
    return comb * p ** k * (1.0 - p) ** (Kbar - k)


def binomial_avg_error(M: int, snr: float, L: int, Q: int, Kbar: int) -> float:
    """Average equal-error probability ``p^T Qmat p`` with independent binomial counts."""
    if Kbar > L - 1 or Kbar < 0:
        raise ValueError(f"Kbar must lie in 0..L-1={L - 1}, got {Kbar}")
    p = binomial_weights(Kbar, L, Q)
    k = np.arange(Kbar + 1, dtype=float)
    Qmat = qfunction(math.sqrt(2.0 * M) * theta(snr, k[:, None], k[None, :]))
    return float(p @ Qmat @ p)


def zc_success_prob(L: int, Q: int, K: int, omega: float) -> float:
    """Asymptotic (large-M) success probability with ``Q`` ZC sequences of length ``L``.

    ``omega`` is the linear SINR threshold.
    """
    if not (Q > L >= 1) or K < 1 or not omega > 0:
        raise ValueError(f"need Q > L >= 1, K >= 1, omega > 0; got L={L}, Q={Q}, K={K}, omega={omega}")
    alpha = 1.0 - L / Q
    T = min(math.floor(L / omega), K - 1)
    n = K - 1
    tail = sum(math.comb(n, k) * alpha ** k * (1.0 - alpha) ** (n - k) for k in range(T + 1))
    return collision_free_prob(Q, K) * tail
