"""Random activity, Rayleigh fading and the preamble-phase received signal.

Power control is assumed to invert large-scale fading, so every active
device arrives with the same receive power ``P_rx`` and
``h_k * sqrt(P_k) = v_k * sqrt(P_rx)`` with ``v_k ~ CN(0, I_M)``. The
per-device path loss and transmit power therefore never appear
explicitly; ``ChannelConfig.snr`` is all that is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pool import PreamblePool, SIndexFamily

__all__ = [
    "ChannelConfig",
    "Scenario",
    "make_rng",
    "cscg",
    "draw_assignment",
    "draw_fading",
    "synthesize_Y",
    "occupancy",
    "draw_scenario",
]


@dataclass(frozen=True)
class ChannelConfig:
    """Antennas ``M``, active devices ``K`` and linear SNR ``P_rx / N0``."""

    M: int
    K: int
    snr: float
    N0: float = 1.0

    def __post_init__(self):
        if self.M < 1 or self.K < 0:
            raise ValueError(f"need M >= 1 and K >= 0, got M={self.M}, K={self.K}")
        if not (self.snr > 0 and self.N0 > 0):
            raise ValueError(f"snr and N0 must be positive, got {self.snr}, {self.N0}")

    @property
    def P_rx(self) -> float:
        return self.snr * self.N0


@dataclass(frozen=True)
class Scenario:
    """One Monte Carlo realization of the preamble phase.

    Attributes
    ----------
    assignment : (K,) int array
        S-preamble index chosen by each active device.
    V : (M, K) complex array
        Small-scale fading vectors, one column per device.
    Y : (M, N) complex array
        Received preamble-phase signal.
    occupancy : (Q,) int array
        Number of devices on each S-preamble (``K_q``).
    kappa : (L,) int array
        Number of devices whose S-preamble contains preamble ``l``.
    """

    assignment: np.ndarray
    V: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)
    occupancy: np.ndarray = field(repr=False)
    kappa: np.ndarray = field(repr=False)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox generator for stream ``stream`` of master ``seed``.

    Streams are derived through ``SeedSequence`` spawn keys, so each
    trial index gets an independent sequence that does not depend on
    the order in which trials are executed.
    """
    ss = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=(int(stream) & 0xFFFFFFFFFFFFFFFF,))
    return np.random.Generator(np.random.Philox(ss))


def cscg(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly symmetric complex Gaussian samples with the given variance."""
    shape = tuple(np.atleast_1d(shape)) if not isinstance(shape, tuple) else shape
    z = rng.standard_normal(shape + (2,)).view(np.complex128)[..., 0]
    return z * np.sqrt(variance / 2.0)


def draw_assignment(rng: np.random.Generator, K: int, Q: int) -> np.ndarray:
    if Q < 1:
        raise ValueError(f"need at least one S-preamble, got Q={Q}")
    return rng.integers(0, Q, size=K)


def draw_fading(rng: np.random.Generator, M: int, K: int) -> np.ndarray:
    return cscg(rng, (M, K))


def synthesize_Y(pool: PreamblePool, family: SIndexFamily, assignment: np.ndarray,
                 V: np.ndarray, config: ChannelConfig,
                 rng: np.random.Generator | None) -> np.ndarray:
    """``Y = sum_k sqrt(P_rx) v_k s_{q(k)}^T + N``.

    ``rng=None`` gives the noise-free signal.
    """
    assignment = np.asarray(assignment, dtype=np.int64)
    M = config.M
    if V.shape != (M, assignment.size):
        raise ValueError(f"fading matrix has shape {V.shape}, expected {(M, assignment.size)}")
    if pool.L != family.L:
        raise ValueError(f"pool size {pool.L} does not match family size {family.L}")
    if assignment.size and (assignment.min() < 0 or assignment.max() >= family.Q):
        raise ValueError("assignment refers to a nonexistent S-preamble")
    # row k of S_T is s_{q(k)}^T
    S_T = pool.C.T[family.index_array[assignment]].sum(axis=1)
    Y = np.sqrt(config.P_rx) * (V @ S_T)
    if rng is not None:
        Y = Y + cscg(rng, (M, pool.N), config.N0)
    return Y


def occupancy(assignment: np.ndarray, family: SIndexFamily) -> tuple[np.ndarray, np.ndarray]:
    """Per-S-preamble counts ``K_q`` and per-preamble counts ``kappa_l``."""
    Kq = np.bincount(np.asarray(assignment, dtype=np.int64), minlength=family.Q)
    kappa = np.bincount(family.index_array[assignment].ravel(), minlength=family.L)
    return Kq, kappa


def draw_scenario(pool: PreamblePool, family: SIndexFamily, config: ChannelConfig,
                  rng: np.random.Generator) -> Scenario:
    """Draw assignment, fading and noise (in that order) and build ``Y``."""
    assignment = draw_assignment(rng, config.K, family.Q)
    V = draw_fading(rng, config.M, config.K)
    Y = synthesize_Y(pool, family, assignment, V, config, rng)
    Kq, kappa = occupancy(assignment, family)
    return Scenario(assignment=assignment, V=V, Y=Y, occupancy=Kq, kappa=kappa)
