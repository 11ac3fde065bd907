"""Orthonormal preamble pool, S-preamble index sets and the transfer matrix.

Indices are 0-based throughout the package: preamble ``l`` lives in
column ``l`` of the pool matrix and S-preamble ``q`` in column ``q`` of
the transfer matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = [
    "UnsupportedOrderError",
    "PreamblePool",
    "SIndexFamily",
    "build_pool",
    "enumerate_ssets",
    "build_transfer_matrix",
    "spreamble_waveform",
]


class UnsupportedOrderError(ValueError):
    """Raised for a superposition order other than 1 or 2."""


@dataclass(frozen=True)
class PreamblePool:
    """``L = N`` orthonormal constant-modulus sequences of length ``N``.

    ``C`` is ``N x L``; column ``l`` is preamble ``c_l``.
    """

    N: int
    C: np.ndarray = field(repr=False)

    @property
    def L(self) -> int:
        return self.N


@dataclass(frozen=True)
class SIndexFamily:
    """All ``B``-subsets of ``{0, ..., L-1}`` in lexicographic order."""

    L: int
    B: int
    sets: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def Q(self) -> int:
        return len(self.sets)

    @cached_property
    def index_array(self) -> np.ndarray:
        """``Q x B`` integer array of the sets (row ``q`` is ``A_q``)."""
        idx = np.asarray(self.sets, dtype=np.int64).reshape(self.Q, self.B)
        idx.setflags(write=False)
        return idx

    @cached_property
    def Phi(self) -> np.ndarray:
        return build_transfer_matrix(self)


def build_pool(N: int) -> PreamblePool:
    """Unitary DFT basis: ``C[n, l] = exp(-2j*pi*n*l/N) / sqrt(N)``."""
    if int(N) != N or N < 2:
        raise ValueError(f"pool length must be an integer >= 2, got {N!r}")
    N = int(N)
    n = np.arange(N)
    C = np.exp(-2j * np.pi * np.outer(n, n) / N) / np.sqrt(N)
    C.setflags(write=False)
    return PreamblePool(N=N, C=C)


def enumerate_ssets(L: int, B: int) -> SIndexFamily:
    if B not in (1, 2):
        raise UnsupportedOrderError(f"superposition order B={B} is not supported (use 1 or 2)")
    if L < 1 or B > L:
        raise ValueError(f"need 1 <= B <= L, got L={L}, B={B}")
    sets = tuple(itertools.combinations(range(L), B))
    assert len(sets) == math.comb(L, B)
    return SIndexFamily(L=L, B=B, sets=sets)


def build_transfer_matrix(family: SIndexFamily) -> np.ndarray:
    """Binary ``L x Q`` biadjacency matrix: ``Phi[l, q] = 1`` iff ``l`` in ``A_q``."""
    Phi = np.zeros((family.L, family.Q), dtype=np.int8)
    idx = family.index_array
    cols = np.repeat(np.arange(family.Q), family.B)
    Phi[idx.ravel(), cols] = 1
    Phi.setflags(write=False)
    return Phi


def spreamble_waveform(pool: PreamblePool, indices: Sequence[int]) -> np.ndarray:
    """Sum of the pool columns listed in ``indices``."""
    idx = np.asarray(indices, dtype=np.int64)
    if idx.size == 0 or idx.min() < 0 or idx.max() >= pool.L:
        raise ValueError(f"preamble indices {list(indices)} out of range 0..{pool.L - 1}")
    return pool.C[:, idx].sum(axis=1)
