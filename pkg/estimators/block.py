"""
Block thresholding estimators.

truncated-block keeps every level on which some block fires but clamps each
coefficient to t_j: sign(Y)(|Y| ^ t_j). plain-block keeps such levels verbatim.
The two only differ on levels with 1 < L_j < inf.
"""
from __future__ import annotations

import numpy as np

from domain.models import EstimateResult, EstimatorConfig, NoisyCoefficients
from blocks.partition import level_partition
from blocks.statistics import detection_threshold, level_energies, level_statistics
from estimators.base import BaseEstimator, build_result


def clamp(y: np.ndarray, bound: float) -> np.ndarray:
    """sign(y) (|y| ^ bound)."""
    return np.sign(y) * np.minimum(np.abs(y), bound)


def _block_zero_mask(energies: np.ndarray, size: int, threshold: float) -> np.ndarray:
    """True for coefficients whose own block has sum of squares below the threshold."""
    if energies.shape[0] == 0:
        return np.zeros(size, dtype=bool)
    silent = energies[:, -1] < threshold
    return np.repeat(silent, energies.shape[1])[:size]


def _threshold_levels(
    obs: NoisyCoefficients,
    cfg: EstimatorConfig,
    truncate: bool,
    energies: list[np.ndarray] | None,
) -> EstimateResult:
    if energies is None:
        energies = level_energies(obs, level_partition(obs.max_level, obs.n))
    stats = level_statistics(obs, cfg.gamma, energies)
    threshold = detection_threshold(cfg.gamma, obs.n, obs.sigma)
    protected = cfg.coarse_max_level if cfg.keep_coarse else -2

    levels: list[np.ndarray] = []
    for i, (y, L, t, e) in enumerate(zip(obs.y, stats.L, stats.t, energies)):
        j = i - 1
        if j <= protected:
            # exempt from zeroing only
            levels.append(clamp(y, t) if truncate and np.isfinite(L) else y.copy())
            continue
        if np.isinf(L):
            d = np.zeros_like(y)
        elif truncate:
            d = clamp(y, t)
        else:
            d = y.copy()
        if cfg.block_zeroing:
            d[_block_zero_mask(e, y.size, threshold)] = 0.0
        levels.append(d)
    return build_result(obs, levels, stats, protected)


def truncated_block_threshold(
    obs: NoisyCoefficients,
    cfg: EstimatorConfig,
    energies: list[np.ndarray] | None = None,
) -> EstimateResult:
    """d_{j,k} = sign(Y_{j,k}) (|Y_{j,k}| ^ t_j) on levels -1..J.

    ``energies`` may carry precomputed :func:`blocks.statistics.level_energies`
    so a gamma sweep sorts each block once.
    """
    return _threshold_levels(obs, cfg, truncate=True, energies=energies)


def plain_block_threshold(
    obs: NoisyCoefficients,
    cfg: EstimatorConfig,
    energies: list[np.ndarray] | None = None,
) -> EstimateResult:
    """Y_{j,k} on levels where some block fires (L_j < inf), zero elsewhere."""
    return _threshold_levels(obs, cfg, truncate=False, energies=energies)


class TruncatedBlockEstimator(BaseEstimator):
    variant = "truncated-block"

    def estimate(self, obs: NoisyCoefficients, cfg: EstimatorConfig) -> EstimateResult:
        return truncated_block_threshold(obs, cfg)


class PlainBlockEstimator(BaseEstimator):
    variant = "plain-block"

    def estimate(self, obs: NoisyCoefficients, cfg: EstimatorConfig) -> EstimateResult:
        return plain_block_threshold(obs, cfg)
