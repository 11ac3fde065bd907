"""Single-trial pipelines and chunked Monte Carlo counters.

Every trial ``t`` draws from its own stream ``make_rng(seed, t)``, and the
chunk functions return integer counts, so summing chunks gives the same
result no matter how trials are split across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .channel import ChannelConfig, Scenario, cscg, draw_scenario, make_rng
from .detection import DetectionReport, correlate, detect_all
from .estimation import estimate_channels
from .link import device_sinrs
from .pool import PreamblePool, SIndexFamily, build_pool, enumerate_ssets

__all__ = [
    "LinkSetup",
    "genie_report",
    "run_detection_trial",
    "run_link_trial",
    "detection_counts",
    "link_counts",
    "theory_counts",
]


@dataclass(frozen=True)
class LinkSetup:
    """Parameters of one Monte Carlo point.

    ``snr`` is the linear receive SNR actually used in the simulation;
    any power boost for the single-preamble baseline is applied by the
    caller.
    """

    M: int
    K: int
    L: int
    B: int
    snr: float
    N0: float = 1.0
    kappa_source: str = "genie"

    @property
    def config(self) -> ChannelConfig:
        return ChannelConfig(M=self.M, K=self.K, snr=self.snr, N0=self.N0)


@lru_cache(maxsize=None)
def _pool(N: int) -> PreamblePool:
    return build_pool(N)


@lru_cache(maxsize=None)
def _family(L: int, B: int) -> SIndexFamily:
    return enumerate_ssets(L, B)


def genie_report(occupancy: np.ndarray) -> DetectionReport:
    """Error-free activity decisions, used for the single-preamble baseline."""
    occupancy = np.asarray(occupancy, dtype=np.int64)
    nan = np.full(occupancy.size, np.nan)
    return DetectionReport(decisions=occupancy > 0, y1=nan, tau=nan, occupancy=occupancy)


def _scenario(setup: LinkSetup, rng) -> tuple[Scenario, np.ndarray, SIndexFamily]:
    pool = _pool(setup.L)
    family = _family(setup.L, setup.B)
    scenario = draw_scenario(pool, family, setup.config, rng)
    return scenario, correlate(pool, scenario.Y), family


def run_detection_trial(setup: LinkSetup, rng) -> tuple[int, int, int, int]:
    """``(false_alarms, unused, missed, used)`` over all S-preambles of one trial."""
    scenario, G, family = _scenario(setup, rng)
    report = detect_all(G, family, setup.config, scenario.occupancy, setup.kappa_source)
    return report.error_counts()


def run_link_trial(setup: LinkSetup, rng):
    """Per-device ``(collision_free, detected, sinr)`` and a rank-deficiency flag."""
    scenario, G, family = _scenario(setup, rng)
    if setup.B == 1:
        report = genie_report(scenario.occupancy)
        detected = report.detected
        # Phi is the identity: the LS estimate is the correlator output itself
        A_hat = G[:, detected]
        deficient = False
    else:
        report = detect_all(G, family, setup.config, scenario.occupancy, setup.kappa_source)
        est = estimate_channels(G, family.Phi, report.detected)
        detected, A_hat, deficient = est.detected, est.A_hat, est.rank_deficient
    cf, det, sinr = device_sinrs(scenario, detected, A_hat, setup.config.P_rx, setup.N0)
    return cf, det, sinr, deficient


def detection_counts(setup: LinkSetup, seed: int, start: int, stop: int) -> np.ndarray:
    out = np.zeros(4, dtype=np.int64)
    for t in range(start, stop):
        out += run_detection_trial(setup, make_rng(seed, t))
    return out


def link_counts(setup: LinkSetup, omegas, seed: int, start: int, stop: int) -> np.ndarray:
    """Successful devices per threshold in ``omegas``, then device and rank-deficient-trial totals."""
    omegas = np.asarray(omegas, dtype=float)
    out = np.zeros(omegas.size + 2, dtype=np.int64)
    for t in range(start, stop):
        cf, det, sinr, deficient = run_link_trial(setup, make_rng(seed, t))
        ok = (cf & det)[None, :] & (sinr[None, :] >= omegas[:, None])
        out[:-2] += ok.sum(axis=1)
        out[-2] += sinr.size
        out[-1] += deficient
    return out


def theory_counts(setup: LinkSetup, omegas, seed: int, start: int, stop: int) -> np.ndarray:
    """``Pr(SINR >= omega)`` counts for a collision-free device with a single-correlator estimate.

    The beam is ``sqrt(P) v_0 + n`` with ``n ~ CN(0, N0 I)``; the other
    ``K - 1`` devices only interfere. Rank deficiency and detection errors
    are ignored, so combined with the collision-free probability this is an
    optimistic reference curve.
    """
    omegas = np.asarray(omegas, dtype=float)
    out = np.zeros(omegas.size + 1, dtype=np.int64)
    P = setup.snr * setup.N0
    for t in range(start, stop):
        rng = make_rng(seed, t)
        V = cscg(rng, (setup.M, setup.K))
        w = np.sqrt(P) * V[:, :1] + cscg(rng, (setup.M, 1), setup.N0)
        s = _kernels.conjugate_sinr(np.ascontiguousarray(w), V, np.zeros(1, dtype=np.int64), P, setup.N0)[0]
        out[:-1] += s >= omegas
        out[-1] += 1
    return out
