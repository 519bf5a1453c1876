from __future__ import annotations

import numpy as np

from domain.models import CoefficientTree, FunctionSpec
from errors import SizingError, StructureError
from wavelet.functions import evaluate_function
from wavelet.haar import evaluate_expansion


def l2_risk(estimate: CoefficientTree, truth: CoefficientTree, tail_energy: float = 0.0) -> float:
    """||f_hat - f||_2^2 by Parseval: coefficient error up to J plus the true tail.

    Truth levels finer than the estimate count in full, as if estimated by zero.
    """
    if truth.max_level < estimate.max_level:
        raise StructureError(f"truth stops at level {truth.max_level}, estimate at {estimate.max_level}")
    error = 0.0
    for d_hat, d in zip(estimate.levels, truth.levels):
        if d_hat.shape != d.shape:
            raise StructureError(f"level shapes differ: {d_hat.shape} vs {d.shape}")
        diff = d_hat - d
        error += float(np.dot(diff, diff))
    for d in truth.levels[len(estimate.levels) :]:
        error += float(np.dot(d, d))
    return error + tail_energy


def linf_risk(
    estimate: CoefficientTree,
    truth_spec: FunctionSpec,
    grid_size: int,
    truth_values: np.ndarray | None = None,
    block_len: int | None = None,
) -> float:
    """max |f_hat - f| over the grid midpoints.

    f_hat is piecewise constant at scale 2^{-(J+1)}, so midpoints evaluate it
    exactly; ``truth_values`` lets repeated calls skip re-evaluating f.
    """
    if grid_size < 2**estimate.max_level:
        raise SizingError(f"grid of {grid_size} points is coarser than the estimate")
    if truth_values is None:
        truth_values = evaluate_function(truth_spec, grid_size, block_len)
    return float(np.max(np.abs(evaluate_expansion(estimate, grid_size) - truth_values)))
