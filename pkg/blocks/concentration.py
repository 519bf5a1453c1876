"""
Chi-square concentration diagnostics.

The estimator's guarantees hold on the event that every block's noise energy
stays below 6.95 ln n. These helpers evaluate the tail bound behind that event
and check the event, and its consequences for block detection, on simulated
data where the truth is known.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import special

from domain.models import BlockPartition, CoefficientTree
from errors import DomainError
from blocks.statistics import detection_threshold

EVENT_T_CONSTANT = 6.95
WEAK_SIGNAL_CONSTANT = 1e-5
STRONG_SIGNAL_FACTOR = 4.0


def chi_square_tail_bound(m: int, Q: float) -> float:
    """exp(m/2 (1 - Q + ln Q)) >= P(chi^2_m >= Q m), valid for Q >= e."""
    if m < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got {m}")
    if Q < math.e:
        raise DomainError(f"the bound requires Q >= e, got {Q}")
    return math.exp(m * (1.0 - Q + math.log(Q)) / 2.0)


def chi_square_tail_exact(m: int, x: float) -> float:
    """P(chi^2_m >= x) via the regularized upper incomplete gamma function."""
    return float(special.gammaincc(m / 2.0, x / 2.0))


def _block_sums(values: np.ndarray, blocks: Sequence[tuple[int, int]]) -> np.ndarray:
    starts = [start for start, _ in blocks]
    return np.add.reduceat(values, starts) if starts else np.zeros(0)


def check_event_T(residuals: list[np.ndarray], partition: BlockPartition, n: int) -> bool:
    """True iff sum of eps^2 over every block of every level is below 6.95 ln n."""
    bound = EVENT_T_CONSTANT * math.log(n)
    for eps, blocks in zip(residuals, partition.levels):
        sums = _block_sums(np.square(eps), blocks)
        if sums.size and np.any(sums >= bound):
            return False
    return True


def block_detection_checks(
    y: list[np.ndarray],
    truth: CoefficientTree,
    partition: BlockPartition,
    gamma: float,
    n: int,
) -> tuple[bool, bool]:
    """Detection consequences of the noise event, at unit noise level.

    Returns (strong_fire, weak_silent): every block with sum d^2 >= 4 gamma ln n/n
    has sum Y^2 >= gamma ln n/n, and within every block the largest subset of
    smallest-|d| entries whose d^2 sums to at most 1e-5 ln n/n has sum Y^2 below
    gamma ln n/n.
    """
    threshold = detection_threshold(gamma, n)
    strong = STRONG_SIGNAL_FACTOR * threshold
    weak = WEAK_SIGNAL_CONSTANT * math.log(n) / n
    strong_fire = True
    weak_silent = True
    for y_level, d_level, blocks in zip(y, truth.levels, partition.levels):
        for start, stop in blocks:
            d_sq = np.square(d_level[start:stop])
            y_sq = np.square(y_level[start:stop])
            if d_sq.sum() >= strong and y_sq.sum() < threshold:
                strong_fire = False
            order = np.argsort(d_sq, kind="stable")
            subset = order[np.cumsum(d_sq[order]) <= weak]
            if subset.size and y_sq[subset].sum() >= threshold:
                weak_silent = False
    return strong_fire, weak_silent
