"""
Known-smoothness projection estimator.

Y_{j,k} is projected on [-c 2^{-j(2 beta+1)/2}, c 2^{-j(2 beta+1)/2}], the range
of a Hoelder(beta, Q) coefficient, for j <= J_n(beta); higher levels are zero.
Observations are expected at unit noise level (see estimators.factory.estimate).
"""
from __future__ import annotations

import math

import numpy as np

from domain.models import EstimateResult, EstimatorConfig, NoisyCoefficients, dyadic_exponent
from estimators.base import BaseEstimator, build_result
from estimators.block import clamp
from wavelet.functions import holder_constant


def projection_cutoff(n: int, beta: float) -> int:
    """J_n(beta) = floor(log2 n^{1/(2 beta + 1)})."""
    return math.floor(dyadic_exponent(n) / (2.0 * beta + 1.0))


def linf_cutoff(n: int, beta: float) -> int:
    """floor(log2 (n / ln n)^{1/(2 beta + 1)}), the cutoff used for sup-norm rates."""
    return math.floor(math.log2(n / math.log(n)) / (2.0 * beta + 1.0))


def projection_estimator(
    obs: NoisyCoefficients,
    beta: float,
    Q: float,
    c: float | None = None,
) -> EstimateResult:
    c = holder_constant(beta, Q) if c is None else c
    cutoff = projection_cutoff(obs.n, beta)
    levels = []
    for i, y in enumerate(obs.y):
        j = i - 1
        if j > cutoff:
            levels.append(np.zeros_like(y))
            continue
        bound = c * 2.0 ** (-j * (2.0 * beta + 1.0) / 2.0)
        levels.append(clamp(y, bound))
    return build_result(obs, levels)


class ProjectionEstimator(BaseEstimator):
    variant = "projection"

    def estimate(self, obs: NoisyCoefficients, cfg: EstimatorConfig) -> EstimateResult:
        return projection_estimator(obs, cfg.beta, cfg.Q)
