from abc import ABC, abstractmethod

import numpy as np

from domain.models import CoefficientTree, EstimateResult, EstimatorConfig, LevelStatistics, NoisyCoefficients


class BaseEstimator(ABC):
    """Abstract coefficient-wise estimator working on sequence-space observations."""

    variant: str = "unknown"

    @abstractmethod
    def estimate(self, obs: NoisyCoefficients, cfg: EstimatorConfig) -> EstimateResult:
        """Return the estimated coefficient tree plus per-level diagnostics."""


def build_result(
    obs: NoisyCoefficients,
    levels: list[np.ndarray],
    stats: LevelStatistics | None = None,
    protected_max_level: int = -2,
) -> EstimateResult:
    """Wrap estimated levels, counting clamped and zeroed coefficients per level."""
    clamped = np.array([int(np.count_nonzero((d != y) & (d != 0))) for y, d in zip(obs.y, levels)])
    zeroed = np.array([int(np.count_nonzero((d == 0) & (y != 0))) for y, d in zip(obs.y, levels)])
    return EstimateResult(
        coefficients=CoefficientTree(levels=levels),
        stats=stats,
        clamped=clamped,
        zeroed=zeroed,
        protected_max_level=protected_max_level,
    )
