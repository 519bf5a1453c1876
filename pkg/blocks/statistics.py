"""
Level statistic L_j and truncation threshold t_j.

L_j is the smallest number of observations inside one block whose squares sum
to at least gamma ln n / n. Within a block the best subset of a given size is
the largest squares, so sorting each block once and scanning cumulative sums
finds L_j in O(log n log log n) per block, O(n log log n) over all levels.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import optimize

from config import settings
from domain.models import BlockPartition, LevelStatistics, NoisyCoefficients
from errors import CapabilityError, DomainError
from blocks.partition import block_length, level_partition

INF = math.inf

Blocks = Sequence[tuple[int, int]]


def block_energies(y_level: np.ndarray, blocks: Blocks) -> np.ndarray:
    """Cumulative sums of each block's squares sorted in descending order.

    Row b, column i holds the energy of the i+1 largest squares of block b.
    Shorter blocks are zero-padded to the longest one; zeros never shorten a
    qualifying prefix.
    """
    sq = np.square(np.asarray(y_level, dtype=float))
    if not blocks or sq.size == 0:
        return np.zeros((0, 1))
    starts = np.array([start for start, _ in blocks])
    lengths = np.array([stop - start for start, stop in blocks])
    cols = np.arange(lengths.max())
    inside = cols < lengths[:, None]
    rows = np.where(inside, sq[np.where(inside, starts[:, None] + cols, 0)], 0.0)
    ordered = -np.sort(-rows, axis=1, kind="stable")
    return np.cumsum(ordered, axis=1)


def L_from_energies(energies: np.ndarray, threshold: float) -> float:
    hits = energies >= threshold
    fired = hits.any(axis=1)
    if not fired.any():
        return INF
    return float(hits[fired].argmax(axis=1).min() + 1)


def _check_threshold(threshold: float) -> None:
    if not threshold > 0:
        raise DomainError(f"threshold must be positive, got {threshold}")


def compute_L(y_level: np.ndarray, blocks: Blocks, threshold: float) -> float:
    """Fast L_j for one level; ``blocks`` as produced by :func:`blocks.partition.partition`."""
    _check_threshold(threshold)
    return L_from_energies(block_energies(y_level, blocks), threshold)


def compute_L_bruteforce(
    y_level: np.ndarray,
    blocks: Blocks,
    threshold: float,
    max_block: int | None = None,
) -> float:
    """L_j by enumerating every subset of every block. Test oracle only."""
    _check_threshold(threshold)
    limit = max_block or settings.bruteforce_max_block
    sq = np.square(np.asarray(y_level, dtype=float))
    best = INF
    for start, stop in blocks:
        size = stop - start
        if size > limit:
            raise CapabilityError(f"block of length {size} exceeds the enumeration bound {limit}")
        masks = np.arange(1, 2**size)
        bits = ((masks[:, None] >> np.arange(size)) & 1).astype(bool)
        sums = bits.astype(float) @ sq[start:stop]
        qualifying = bits[sums >= threshold]
        if qualifying.size:
            best = min(best, float(qualifying.sum(axis=1).min()))
    return best


def truncation_threshold(L: float, gamma: float, n: int) -> float:
    """t_j = sqrt(gamma ln n / (n (L_j - 1))) with 1/0 = inf and 1/inf = 0."""
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    if L == 1:
        return INF
    if math.isinf(L):
        return 0.0
    return math.sqrt(gamma * math.log(n) / (n * (L - 1)))


def detection_threshold(gamma: float, n: int, sigma: float = 1.0) -> float:
    """sigma^2 gamma ln n / n, the block energy that counts as signal."""
    return sigma**2 * gamma * math.log(n) / n


def level_energies(obs: NoisyCoefficients, part: BlockPartition | None = None) -> list[np.ndarray]:
    part = part if part is not None else level_partition(obs.max_level, obs.n)
    return [block_energies(y, blocks) for y, blocks in zip(obs.y, part.levels)]


def level_statistics(
    obs: NoisyCoefficients,
    gamma: float,
    energies: list[np.ndarray] | None = None,
) -> LevelStatistics:
    """(L_j, t_j) for levels -1..J; t_j is expressed in the units of ``obs``."""
    energies = energies if energies is not None else level_energies(obs)
    threshold = detection_threshold(gamma, obs.n, obs.sigma)
    L = np.array([L_from_energies(e, threshold) for e in energies])
    t = np.array([obs.sigma * truncation_threshold(value, gamma, obs.n) for value in L])
    return LevelStatistics(L=L, t=t, block_len=block_length(obs.n))


def phase_pattern(L: np.ndarray, start_level: int = 0) -> bool:
    """True if (L_j) from ``start_level`` on reads 1..1, then finite > 1, then inf..inf.

    Both outer regimes must be non-empty; the middle band may be empty.
    """
    values = np.asarray(L, dtype=float)[start_level + 1 :]
    codes = np.where(values == 1, 0, np.where(np.isinf(values), 2, 1))
    return bool(codes.size and codes[0] == 0 and codes[-1] == 2 and np.all(np.diff(codes) >= 0))


def cai_gamma() -> float:
    """Root of x - ln x - 3 = 0 (about 4.5052), the blockwise James-Stein constant."""
    return float(optimize.brentq(lambda x: x - math.log(x) - 3.0, 1.5, 10.0))
