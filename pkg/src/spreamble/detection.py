"""Correlator bank and the used/unused S-preamble test.

For ``A_q = {q1, q2}`` the statistic is ``D = g_q1^H g_q2 / sqrt(M)``.
Under the CLT model ``y1 = sqrt(2) Re(D)`` is ``N(0, rho1*rho2)`` when
``q`` is unused and ``N(sqrt(2M) P_rx, rho1*rho2 + P_rx^2)`` when one
device uses it, with ``rho_b = P_rx*kappa_b + N0``. The decision is
``y1 > tau``; by default ``tau`` is the threshold that equalizes the
false-alarm and missed-detection probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .analytics import qfunction
from .channel import ChannelConfig
from .pool import PreamblePool, SIndexFamily, UnsupportedOrderError

__all__ = [
    "DetectionReport",
    "correlate",
    "test_statistic",
    "equal_error_threshold",
    "decide",
    "analytic_error_probs",
    "llr_statistic",
    "estimate_kappa",
    "detect_all",
]


@dataclass(frozen=True)
class DetectionReport:
    """Per-S-preamble decisions for one trial.

    ``y1`` and ``tau`` are NaN where the test was bypassed because one
    component preamble carries no device. ``occupancy`` is the true
    ``K_q`` and is only used for scoring.
    """

    decisions: np.ndarray
    y1: np.ndarray = field(repr=False)
    tau: np.ndarray = field(repr=False)
    occupancy: np.ndarray = field(repr=False)

    @property
    def detected(self) -> np.ndarray:
        return np.flatnonzero(self.decisions)

    def error_counts(self) -> tuple[int, int, int, int]:
        """``(false_alarms, unused, missed, used)``."""
        busy = self.occupancy > 0
        fa = int(np.count_nonzero(self.decisions & ~busy))
        md = int(np.count_nonzero(~self.decisions & busy))
        return fa, int(busy.size - busy.sum()), md, int(busy.sum())


def correlate(pool: PreamblePool, Y: np.ndarray) -> np.ndarray:
    """Matched-filter bank ``G[:, l] = Y conj(c_l)``.

    For the complex pool the matched filter is the conjugate sequence;
    this is what makes ``s_q^T conj(c_l)`` equal 1 on ``A_q`` and 0 off it.
    """
    if Y.ndim != 2 or Y.shape[1] != pool.N:
        raise ValueError(f"received matrix has shape {Y.shape}, expected (M, {pool.N})")
    return Y @ pool.C.conj()


def test_statistic(G: np.ndarray, pair, M: int | None = None) -> tuple[complex, float]:
    """Return ``(D, y1)`` for the S-preamble whose components are ``pair``."""
    if len(pair) != 2:
        raise UnsupportedOrderError("the correlation test needs exactly two component preambles")
    M = G.shape[0] if M is None else M
    a, b = pair
    D = complex(np.vdot(G[:, a], G[:, b])) / math.sqrt(M)
    return D, math.sqrt(2.0) * D.real


def equal_error_threshold(snr, kappa1, kappa2, M, N0=1.0):
    """Threshold ``tau`` at which ``P_FA == P_MD``."""
    snr = np.asarray(snr, dtype=float)
    ratio = snr * snr / ((1.0 + kappa1 * snr) * (1.0 + kappa2 * snr))
    out = N0 * np.sqrt(2.0 * M) * snr / (1.0 + np.sqrt(1.0 + ratio))
    return float(out) if np.ndim(out) == 0 else out


def decide(y1: float, tau: float, kappa1: int | None = None, kappa2: int | None = None) -> bool:
    """``True`` (used) iff ``y1 > tau``; ties go to unused.

    With a known zero component count the S-preamble cannot be in use.
    """
    if kappa1 is not None and kappa2 is not None and min(kappa1, kappa2) == 0:
        return False
    return bool(y1 > tau)


def analytic_error_probs(snr, kappa1, kappa2, M, tau, N0=1.0):
    """``(P_FA, P_MD)`` of the test ``y1 > tau`` under the Gaussian model."""
    P = snr * N0
    rho = (P * kappa1 + N0) * (P * kappa2 + N0)
    p_fa = qfunction(np.asarray(tau) / np.sqrt(rho))
    p_md = qfunction((math.sqrt(2.0 * M) * P - np.asarray(tau)) / np.sqrt(rho + P * P))
    return p_fa, p_md


def llr_statistic(D: complex, snr: float, kappa1: int, kappa2: int, M: int, N0: float = 1.0) -> float:
    """Full two-dimensional log-likelihood statistic ``T(d)``.

    Diagnostic only; :func:`decide` uses the scalar ``y1`` test. Requires
    ``rho1*rho2 > P_rx^2`` so that both covariance eigenvalues are positive.
    """
    P = snr * N0
    s0 = (P * kappa1 + N0) * (P * kappa2 + N0)
    s1 = s0 + P * P
    s2 = s0 - P * P
    if s2 <= 0:
        raise ValueError("covariance under H1 is singular for these counts")
    y1 = math.sqrt(2.0) * D.real
    y2 = math.sqrt(2.0) * D.imag
    u1 = math.sqrt(2.0 * M) * P
    return (y1 - u1) ** 2 / s1 - y1 ** 2 / s0 + (1.0 / s2 - 1.0 / s0) * y2 ** 2


def estimate_kappa(G: np.ndarray, P_rx: float, N0: float = 1.0) -> np.ndarray:
    """Energy-based component counts ``round(max(0, (|g_l|^2/M - N0)/P_rx))``.

    Not part of the genie model; provided for realism studies.
    """
    M = G.shape[0]
    energy = (G.real ** 2 + G.imag ** 2).sum(axis=0) / M
    return np.rint(np.maximum(0.0, (energy - N0) / P_rx)).astype(np.int64)


def detect_all(G: np.ndarray, family: SIndexFamily, config: ChannelConfig,
               occupancy: np.ndarray, kappa_source: str = "genie") -> DetectionReport:
    """Run the equal-error correlation test on every S-preamble.

    ``kappa_source`` is ``"genie"`` (component counts from the true
    occupancy) or ``"estimated"`` (:func:`estimate_kappa`).
    """
    if family.B != 2:
        raise UnsupportedOrderError("the correlation test is defined for B = 2")
    occupancy = np.asarray(occupancy, dtype=np.int64)
    if kappa_source == "genie":
        kappa = family.Phi.astype(np.int64) @ occupancy
    elif kappa_source == "estimated":
        kappa = estimate_kappa(G, config.P_rx, config.N0)
    else:
        raise ValueError(f"unknown kappa source {kappa_source!r}")
    y1, tau, used = _kernels.pair_test(np.ascontiguousarray(G), family.index_array,
                                       np.ascontiguousarray(kappa), config.P_rx, config.N0)
    return DetectionReport(decisions=used, y1=y1, tau=tau, occupancy=occupancy)
