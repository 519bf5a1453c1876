from __future__ import annotations

import numpy as np

from domain.models import EstimateResult, EstimatorConfig, NoisyCoefficients
from errors import ConfigurationError, InvariantViolation
from estimators.base import BaseEstimator
from estimators.block import PlainBlockEstimator, TruncatedBlockEstimator
from estimators.hard import HardThresholdEstimator
from estimators.projection import ProjectionEstimator
from sequence.model import rescale_for_estimation, unscale_estimate

ESTIMATORS: dict[str, type[BaseEstimator]] = {
    "truncated-block": TruncatedBlockEstimator,
    "plain-block": PlainBlockEstimator,
    "projection": ProjectionEstimator,
    "hard": HardThresholdEstimator,
}


def get_estimator(variant: str) -> BaseEstimator:
    try:
        return ESTIMATORS[variant]()
    except KeyError:
        raise ConfigurationError(f"unknown estimator variant {variant!r}") from None


def estimate(obs: NoisyCoefficients, cfg: EstimatorConfig) -> EstimateResult:
    """Estimate on sigma^{-1} Y and scale the coefficients back by sigma.

    Diagnostics (L_j, t_j) stay in unit-noise units; so does the projection
    radius Q, which is divided by sigma along with the observations.
    """
    scaled = rescale_for_estimation(obs)
    result = get_estimator(cfg.variant).estimate(scaled, cfg.at_unit_noise(obs.sigma))
    return result.model_copy(update={"coefficients": unscale_estimate(result.coefficients, obs.sigma)})


def check_result(obs: NoisyCoefficients, result: EstimateResult, variant: str = "truncated-block") -> None:
    """Raise InvariantViolation if the estimate breaks shrinkage or truncation bounds.

    The |d| <= t_j bound is only checked for truncated-block.
    """
    for i, (y, d) in enumerate(zip(obs.y, result.coefficients.levels)):
        j = i - 1
        if np.any(np.abs(d) > np.abs(y) * (1 + 1e-12)) or np.any((d != 0) & (np.sign(d) != np.sign(y))):
            raise InvariantViolation(f"level {j}: estimate is not a shrinkage of the observations")
        if result.stats is None or variant != "truncated-block":
            continue
        t = result.stats.t[i] * obs.sigma
        if j <= result.protected_max_level and t == 0.0:
            continue
        if np.isfinite(t) and np.any(np.abs(d) > t * (1 + 1e-12)):
            raise InvariantViolation(f"level {j}: |d| exceeds t_j = {t:.6g}")
