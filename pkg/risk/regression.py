"""Empirical rate exponents: least-squares slope of log-risk against log n."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import stats

from domain.models import RiskSummary
from errors import DegenerateError

Metric = Literal["l2", "linf"]
Axis = Literal["log_n", "log_n_over_log_n"]


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    slope_se: float
    intercept: float
    points: int


def fit_power_law(ns: Sequence[float], risks: Sequence[float], axis: Axis = "log_n") -> SlopeFit:
    n = np.asarray(ns, dtype=float)
    r = np.asarray(risks, dtype=float)
    if n.size < 2 or n.size != r.size:
        raise DegenerateError(f"need at least two (n, risk) pairs, got {n.size} and {r.size}")
    if np.any(r <= 0):
        raise DegenerateError("risks must be positive to take logarithms")
    x = np.log(n) if axis == "log_n" else np.log(n / np.log(n))
    if np.ptp(x) == 0:
        raise DegenerateError("all sample sizes are equal")
    fit = stats.linregress(x, np.log(r))
    slope_se = float(fit.stderr) if n.size > 2 and math.isfinite(fit.stderr) else 0.0
    return SlopeFit(float(fit.slope), slope_se, float(fit.intercept), int(n.size))


def rate_regression(summaries: Sequence[RiskSummary], metric: Metric = "l2", axis: Axis | None = None) -> SlopeFit:
    """Slope of log E||.||_2^2 against log n, or of log E||.||_inf against log(n/ln n)."""
    axis = axis or ("log_n" if metric == "l2" else "log_n_over_log_n")
    ordered = sorted(summaries, key=lambda s: s.n)
    risks = [s.l2_mean if metric == "l2" else s.linf_mean for s in ordered]
    return fit_power_law([s.n for s in ordered], risks, axis)
