"""Least-squares recovery of virtual channels from the correlator bank.

Stacking the correlator outputs gives ``g = (PhiBar kron I_M) a``, where
``PhiBar`` keeps the transfer-matrix columns of the detected
S-preambles. The LS solution ``(pinv(PhiBar) kron I_M) g`` decouples per
antenna, so it is applied as ``G @ pinv(PhiBar).T`` without ever forming
the Kronecker product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import make_rng
from .pool import enumerate_ssets

__all__ = [
    "EstimateSet",
    "select_submatrix",
    "rank_of",
    "pinv_and_rank",
    "ls_estimate",
    "estimate_channels",
    "rank_sums",
    "average_rank_curve",
]


@dataclass(frozen=True)
class EstimateSet:
    detected: np.ndarray
    PhiBar: np.ndarray = field(repr=False)
    rank: int
    A_hat: np.ndarray = field(repr=False)

    @property
    def rank_deficient(self) -> bool:
        return self.rank < self.detected.size


def select_submatrix(Phi: np.ndarray, detected: Sequence[int]) -> np.ndarray:
    idx = np.asarray(detected, dtype=np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= Phi.shape[1]):
        raise ValueError(f"detected indices must lie in 0..{Phi.shape[1] - 1}")
    if np.unique(idx).size != idx.size:
        raise ValueError("detected indices contain duplicates")
    return Phi[:, idx]


def _svd_tolerance(shape, smax: float) -> float:
    return max(shape) * smax * 1e-10


def pinv_and_rank(PhiBar: np.ndarray) -> tuple[np.ndarray, int]:
    """Moore-Penrose pseudoinverse and numerical rank from one SVD."""
    L, n = PhiBar.shape
    if n == 0:
        return np.zeros((0, L)), 0
    U, s, Vh = np.linalg.svd(PhiBar.astype(np.float64), full_matrices=False)
    keep = s > _svd_tolerance(PhiBar.shape, s[0])
    r = int(keep.sum())
    pinv = (Vh[:r].T / s[:r]) @ U[:, :r].T
    return pinv, r


def rank_of(PhiBar: np.ndarray) -> int:
    if PhiBar.size == 0:
        return 0
    s = np.linalg.svd(PhiBar.astype(np.float64), compute_uv=False)
    return int((s > _svd_tolerance(PhiBar.shape, s[0])).sum())


def ls_estimate(G: np.ndarray, PhiBar: np.ndarray) -> np.ndarray:
    """Minimum-norm LS virtual channels, one column per detected S-preamble."""
    if G.shape[1] != PhiBar.shape[0]:
        raise ValueError(f"bank has {G.shape[1]} correlators but PhiBar has {PhiBar.shape[0]} rows")
    pinv, _ = pinv_and_rank(PhiBar)
    return G @ pinv.T


def estimate_channels(G: np.ndarray, Phi: np.ndarray, detected: Sequence[int]) -> EstimateSet:
    detected = np.asarray(detected, dtype=np.int64).ravel()
    PhiBar = select_submatrix(Phi, detected)
    pinv, r = pinv_and_rank(PhiBar)
    return EstimateSet(detected=detected, PhiBar=PhiBar, rank=r, A_hat=G @ pinv.T)


def rank_sums(L: int, K: int, seed: int, start: int, stop: int) -> np.ndarray:
    """``[sum(rank), sum(rank**2)]`` over trials ``start..stop-1`` of random ``K``-column draws."""
    family = enumerate_ssets(L, 2)
    if K < 0 or K > family.Q:
        raise ValueError(f"cannot draw K={K} distinct columns out of Q={family.Q}")
    Phi = family.Phi
    out = np.zeros(2, dtype=np.int64)
    for t in range(start, stop):
        cols = make_rng(seed, t).choice(family.Q, size=K, replace=False)
        r = rank_of(Phi[:, cols])
        out += (r, r * r)
    return out


def average_rank_curve(L: int, Ks: Sequence[int], trials: int,
                       seed: int = 0) -> list[tuple[int, float, float]]:
    """Mean rank of ``PhiBar`` built from ``K`` distinct random columns of the B=2 ``Phi``.

    Returns ``(K, mean_rank, standard_error)`` per entry of ``Ks``. Trial
    ``t`` uses stream ``t`` of ``seed``.
    """
    out = []
    for K in Ks:
        s1, s2 = rank_sums(L, K, seed, 0, trials)
        mean = s1 / trials
        var = max(s2 / trials - mean * mean, 0.0) * trials / max(trials - 1, 1)
        out.append((int(K), float(mean), float(np.sqrt(var / trials))))
    return out
