"""Conjugate beamforming with estimated channels and per-device success."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import ChannelConfig, Scenario
from .detection import DetectionReport
from .estimation import EstimateSet

__all__ = ["DeviceOutcome", "sinr_conjugate", "device_sinrs", "evaluate_trial"]


@dataclass(frozen=True)
class DeviceOutcome:
    device: int
    collision_free: bool
    detected: bool
    sinr: float
    success: bool


def sinr_conjugate(beam: np.ndarray, V: np.ndarray, k: int, P, N0: float = 1.0) -> float:
    """SINR of device ``k`` after combining with ``beam^H``.

    ``P`` is either a common receive power or one power per column of ``V``.
    """
    beam = np.asarray(beam).reshape(-1)
    if not np.any(beam):
        return 0.0
    P = np.broadcast_to(np.asarray(P, dtype=float), (V.shape[1],))
    gains = np.abs(beam.conj() @ V) ** 2 * P
    signal = gains[k]
    den = gains.sum() - signal + N0 * np.vdot(beam, beam).real
    return float(signal / den)


def device_sinrs(scenario: Scenario, detected: np.ndarray, A_hat: np.ndarray,
                 P: float, N0: float = 1.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Arrays ``(collision_free, detected, sinr)`` over the ``K`` devices.

    The beam of device ``k`` is the estimated virtual channel of its
    S-preamble; devices whose S-preamble was not detected get SINR 0.
    """
    q = scenario.assignment
    K = q.size
    collision_free = scenario.occupancy[q] == 1
    column = np.full(scenario.occupancy.size, -1, dtype=np.int64)
    column[detected] = np.arange(len(detected))
    col = column[q]
    found = col >= 0
    sinr = np.zeros(K)
    if found.any():
        W = np.ascontiguousarray(A_hat[:, col[found]])
        target = np.flatnonzero(found)
        sinr[found] = _kernels.conjugate_sinr(W, np.ascontiguousarray(scenario.V), target, float(P), float(N0))
    return collision_free, found, sinr


def evaluate_trial(scenario: Scenario, report: DetectionReport, estimates: EstimateSet,
                   omega: float, config: ChannelConfig) -> list[DeviceOutcome]:
    """Success of each device: collision-free, detected and ``SINR >= omega``."""
    cf, det, sinr = device_sinrs(scenario, estimates.detected, estimates.A_hat,
                                 config.P_rx, config.N0)
    ok = cf & det & (sinr >= omega)
    return [DeviceOutcome(device=k, collision_free=bool(cf[k]), detected=bool(det[k]),
                          sinr=float(sinr[k]), success=bool(ok[k]))
            for k in range(sinr.size)]
