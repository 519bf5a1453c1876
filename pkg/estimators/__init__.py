from estimators.base import BaseEstimator
from estimators.block import clamp, truncated_block_threshold, plain_block_threshold
from estimators.projection import projection_estimator
from estimators.hard import hard_threshold
from estimators.factory import ESTIMATORS, get_estimator, estimate

__all__ = [
    "BaseEstimator", "clamp", "truncated_block_threshold", "plain_block_threshold",
    "projection_estimator", "hard_threshold", "ESTIMATORS", "get_estimator", "estimate",
]
