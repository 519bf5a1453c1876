from __future__ import annotations

import math

import numpy as np

from domain.models import EstimateResult, EstimatorConfig, NoisyCoefficients
from estimators.base import BaseEstimator, build_result


def universal_threshold(n: int, sigma: float, lambda_mult: float = 1.0) -> float:
    """lambda_mult * sigma * sqrt(2 ln n / n)."""
    return lambda_mult * sigma * math.sqrt(2.0 * math.log(n) / n)


def hard_threshold(obs: NoisyCoefficients, lambda_mult: float = 1.0) -> EstimateResult:
    """Term-by-term hard thresholding at the universal threshold."""
    lam = universal_threshold(obs.n, obs.sigma, lambda_mult)
    levels = [np.where(np.abs(y) > lam, y, 0.0) for y in obs.y]
    return build_result(obs, levels)


class HardThresholdEstimator(BaseEstimator):
    variant = "hard"

    def estimate(self, obs: NoisyCoefficients, cfg: EstimatorConfig) -> EstimateResult:
        return hard_threshold(obs, cfg.lambda_mult)
