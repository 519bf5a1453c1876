"""
CSV schemas. One header line, UTF-8, LF endings, floats with 17 significant digits.

  gamma_sweep.csv   gamma,n,sigma,reps,l2_rmse,l2_se,linf_mean,linf_se
  lj_dist.csv       level,L_value,probability
  rates.csv         n,l2_mse,l2_se,linf_mean,linf_se[,cmp_l2_mse,cmp_linf_mean,linf_ratio]
  denoise_diag.csv  level,L,t,clamped,zeroed

l2_se in gamma_sweep.csv is the delta-method standard error of l2_rmse.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from domain.models import EstimateResult, RiskSummary

GAMMA_SWEEP_COLUMNS = ["gamma", "n", "sigma", "reps", "l2_rmse", "l2_se", "linf_mean", "linf_se"]
LJ_COLUMNS = ["level", "L_value", "probability"]
RATES_COLUMNS = ["n", "l2_mse", "l2_se", "linf_mean", "linf_se"]
RATES_COMPARE_COLUMNS = ["cmp_l2_mse", "cmp_linf_mean", "linf_ratio"]
DENOISE_DIAG_COLUMNS = ["level", "L", "t", "clamped", "zeroed"]


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n", encoding="utf-8")
    return path


def gamma_sweep_frame(summaries: Sequence[RiskSummary]) -> pd.DataFrame:
    rows = [
        {
            "gamma": s.gamma,
            "n": s.n,
            "sigma": s.sigma,
            "reps": s.reps,
            "l2_rmse": s.l2_rmse,
            "l2_se": s.l2_rmse_se,
            "linf_mean": s.linf_mean,
            "linf_se": s.linf_se,
        }
        for s in sorted(summaries, key=lambda s: s.gamma)
    ]
    return pd.DataFrame(rows, columns=GAMMA_SWEEP_COLUMNS)


def lj_frame(distribution: dict[int, dict[str, float]]) -> pd.DataFrame:
    rows = [
        {"level": level, "L_value": value, "probability": probability}
        for level in sorted(distribution)
        for value, probability in distribution[level].items()
    ]
    return pd.DataFrame(rows, columns=LJ_COLUMNS)


def rates_frame(
    summaries: Sequence[RiskSummary],
    compare: Sequence[RiskSummary] | None = None,
) -> pd.DataFrame:
    rows = []
    for i, s in enumerate(summaries):
        row = {"n": s.n, "l2_mse": s.l2_mean, "l2_se": s.l2_se, "linf_mean": s.linf_mean, "linf_se": s.linf_se}
        if compare is not None:
            other = compare[i]
            row["cmp_l2_mse"] = other.l2_mean
            row["cmp_linf_mean"] = other.linf_mean
            row["linf_ratio"] = other.linf_mean / s.linf_mean if s.linf_mean > 0 else np.inf
        rows.append(row)
    columns = RATES_COLUMNS + (RATES_COMPARE_COLUMNS if compare is not None else [])
    return pd.DataFrame(rows, columns=columns)


def denoise_diag_frame(result: EstimateResult) -> pd.DataFrame:
    if result.stats is None:
        L = t = [np.nan] * len(result.clamped)
    else:
        L, t = result.stats.L, result.stats.t
    return pd.DataFrame(
        {
            "level": np.arange(-1, len(result.clamped) - 1),
            "L": L,
            "t": t,
            "clamped": result.clamped,
            "zeroed": result.zeroed,
        },
        columns=DENOISE_DIAG_COLUMNS,
    )


def write_signal(values: np.ndarray, path: Path) -> Path:
    np.savetxt(path, values, fmt="%.17g", newline="\n")
    return path


def empty_diag_frame() -> pd.DataFrame:
    return pd.DataFrame(columns=DENOISE_DIAG_COLUMNS)
