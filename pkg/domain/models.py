from __future__ import annotations

import math
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def is_power_of_two(value: int) -> bool:
    return value >= 1 and (value & (value - 1)) == 0


def dyadic_exponent(value: int) -> int:
    """log2(value) for a power of two; callers check admissibility first."""
    return int(value).bit_length() - 1


# ─── Wavelet coefficients ──────────────────────────────────────────────────────

class CoefficientTree(BaseModel):
    """Haar coefficients by level. ``levels[0]`` is level -1 (the scaling coefficient)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    levels: list[np.ndarray]
    metadata: dict[str, float] = Field(default_factory=dict)

    @field_validator("levels", mode="before")
    @classmethod
    def _as_float_arrays(cls, value):
        return [np.asarray(level, dtype=float).reshape(-1) for level in value]

    @model_validator(mode="after")
    def _check_shape(self) -> "CoefficientTree":
        if not self.levels:
            raise ValueError("a coefficient tree needs at least level -1")
        for i, level in enumerate(self.levels):
            expected = 1 if i == 0 else 2 ** (i - 1)
            if level.size != expected:
                raise ValueError(f"level {i - 1} holds {level.size} coefficients, expected {expected}")
            if not np.all(np.isfinite(level)):
                raise ValueError(f"level {i - 1} contains non-finite coefficients")
        return self

    @property
    def max_level(self) -> int:
        return len(self.levels) - 2

    def level(self, j: int) -> np.ndarray:
        return self.levels[j + 1]

    def flat(self) -> np.ndarray:
        return np.concatenate(self.levels)

    def energy(self) -> float:
        return float(sum(np.dot(level, level) for level in self.levels))

    def scaled(self, factor: float) -> "CoefficientTree":
        return CoefficientTree(levels=[level * factor for level in self.levels], metadata=dict(self.metadata))

    @classmethod
    def zeros(cls, max_level: int) -> "CoefficientTree":
        return cls(levels=[np.zeros(1)] + [np.zeros(2**j) for j in range(max_level + 1)])


FunctionKind = Literal["sine", "block-spike", "samples"]


class FunctionSpec(BaseModel):
    """Target regression function.

    ``sine`` is f(x) = sqrt(2) sin(2 pi x). ``block-spike`` puts equal-magnitude
    wavelet coefficients c(beta, Q) 2^{-level(2 beta + 1)/2} on every full block of
    ``level``; it is the worst case for untruncated block thresholding.
    ``samples`` reads a piecewise-constant function from a text file.
    """

    model_config = ConfigDict(frozen=True)

    kind: FunctionKind = "sine"
    beta: Optional[float] = Field(default=None, gt=0)
    Q: Optional[float] = Field(default=None, gt=0)
    level: Optional[int] = None
    block_len: Optional[int] = Field(default=None, ge=1)
    path: Optional[Path] = None

    @model_validator(mode="after")
    def _check_kind(self) -> "FunctionSpec":
        if self.kind == "block-spike":
            if self.beta is None or self.Q is None:
                raise ValueError("block-spike needs beta and Q")
            if self.level is None or self.level < 1:
                raise ValueError("block-spike needs level >= 1")
        if self.kind == "samples" and self.path is None:
            raise ValueError("samples needs a path")
        return self

    @classmethod
    def parse(cls, text: str) -> "FunctionSpec":
        """Parse ``sine``, ``block-spike:beta:Q:level`` or ``samples:path``."""
        kind, _, rest = text.partition(":")
        if kind == "sine":
            return cls(kind="sine")
        if kind == "block-spike":
            parts = rest.split(":")
            if len(parts) != 3:
                raise ValueError(f"expected block-spike:beta:Q:level, got {text!r}")
            return cls(kind="block-spike", beta=float(parts[0]), Q=float(parts[1]), level=int(parts[2]))
        if kind == "samples":
            return cls(kind="samples", path=Path(rest))
        raise ValueError(f"unknown function kind {kind!r}")

    def label(self) -> str:
        if self.kind == "block-spike":
            return f"block-spike:{self.beta:g}:{self.Q:g}:{self.level}"
        if self.kind == "samples":
            return f"samples:{self.path}"
        return self.kind


# ─── Observations ──────────────────────────────────────────────────────────────

class SeedSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(..., ge=0, lt=2**64)
    repetition_index: int = Field(default=0, ge=0)


class NoisyCoefficients(BaseModel):
    """Observed Y_{j,k} = d_{j,k} + sigma n^{-1/2} eps_{j,k}.

    Simulated observations run to level log2(n); coefficients of n sampled
    values stop one level earlier.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    y: list[np.ndarray]
    n: int = Field(..., gt=0)
    sigma: float = Field(..., gt=0, allow_inf_nan=False)

    @field_validator("y", mode="before")
    @classmethod
    def _as_float_arrays(cls, value):
        return [np.asarray(level, dtype=float).reshape(-1) for level in value]

    @model_validator(mode="after")
    def _check_shape(self) -> "NoisyCoefficients":
        if not is_power_of_two(self.n):
            raise ValueError(f"n={self.n} is not a power of two")
        J = dyadic_exponent(self.n)
        if len(self.y) - 2 not in (J - 1, J):
            raise ValueError(f"{len(self.y)} levels do not fit n={self.n}")
        CoefficientTree(levels=self.y)
        return self

    @property
    def max_level(self) -> int:
        return len(self.y) - 2

    def as_tree(self) -> CoefficientTree:
        return CoefficientTree(levels=self.y)


# ─── Block statistics and estimates ────────────────────────────────────────────

class BlockPartition(BaseModel):
    """Per-level half-open ranges [start, stop); ``levels[0]`` is level -1."""

    model_config = ConfigDict(frozen=True)

    block_len: int = Field(..., ge=1)
    levels: list[list[tuple[int, int]]]

    def level(self, j: int) -> list[tuple[int, int]]:
        return self.levels[j + 1]


class LevelStatistics(BaseModel):
    """L_j and t_j for levels -1..J. ``inf`` encodes L_j = infinity and t_j = infinity."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    L: np.ndarray
    t: np.ndarray
    block_len: int

    @model_validator(mode="after")
    def _check_pairs(self) -> "LevelStatistics":
        finite = np.isfinite(self.L)
        if np.any(self.L[finite] < 1) or np.any(self.L[finite] > self.block_len):
            raise ValueError("L outside {1..block_len} U {inf}")
        if np.any((self.L == 1) != np.isposinf(self.t)):
            raise ValueError("L = 1 must coincide with t = inf")
        if np.any(~finite != (self.t == 0)):
            raise ValueError("L = inf must coincide with t = 0")
        return self


Variant = Literal["truncated-block", "plain-block", "projection", "hard"]


class EstimatorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(default=7.0, gt=0)
    variant: Variant = "truncated-block"
    beta: Optional[float] = Field(default=None, gt=0)
    Q: Optional[float] = Field(default=None, gt=0)
    lambda_mult: float = Field(default=1.0, gt=0)
    block_zeroing: bool = False
    keep_coarse: bool = False
    coarse_max_level: int = 2

    @model_validator(mode="after")
    def _check_variant(self) -> "EstimatorConfig":
        if self.variant == "projection" and (self.beta is None or self.Q is None):
            raise ValueError("projection needs beta and Q")
        return self

    def at_unit_noise(self, sigma: float) -> "EstimatorConfig":
        """The same Hoelder radius measured on sigma^{-1} Y."""
        if self.Q is None or sigma == 1.0:
            return self
        return self.model_copy(update={"Q": self.Q / sigma})


class EstimateResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coefficients: CoefficientTree
    stats: Optional[LevelStatistics] = None
    clamped: np.ndarray
    zeroed: np.ndarray
    protected_max_level: int = -2

    @property
    def total_zeroed(self) -> int:
        return int(self.zeroed.sum())


# ─── Risk ──────────────────────────────────────────────────────────────────────

class RiskSample(BaseModel):
    l2_sq: float = Field(..., ge=0, allow_inf_nan=False)
    linf: float = Field(..., ge=0, allow_inf_nan=False)
    event_T: bool = True
    zeroed: int = 0


class RiskSummary(BaseModel):
    n: int
    sigma: float
    gamma: float
    variant: str
    function: str
    reps: int
    l2_mean: float
    l2_se: float
    linf_mean: float
    linf_se: float
    se_degenerate: bool = False
    event_T_rate: float = 1.0
    zeroed_mean: float = 0.0
    lj_distribution: Optional[dict[int, dict[str, float]]] = None

    @property
    def l2_rmse(self) -> float:
        return math.sqrt(self.l2_mean)

    @property
    def l2_rmse_se(self) -> float:
        """Delta-method standard error of the root mean squared error."""
        if self.l2_mean == 0:
            return 0.0
        return self.l2_se / (2.0 * self.l2_rmse)
