"""
Monte Carlo risk harness.

Repetitions are split into chunks of consecutive indices. Each chunk rebuilds
the scenario context in its own process and draws noise from the repetition's
own seed, so summaries are identical for any worker count or completion order.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import repeat
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import settings
from domain.models import (
    BlockPartition,
    CoefficientTree,
    EstimatorConfig,
    FunctionSpec,
    RiskSample,
    RiskSummary,
    SeedSpec,
    Variant,
    dyadic_exponent,
    is_power_of_two,
)
from errors import DomainError, SizingError
from blocks.concentration import check_event_T
from blocks.partition import block_length, level_partition
from blocks.statistics import level_energies, level_statistics
from estimators.block import plain_block_threshold, truncated_block_threshold
from estimators.factory import get_estimator
from risk.metrics import l2_risk, linf_risk
from sequence.model import rescale_for_estimation, simulate, standardized_residuals, unscale_estimate
from wavelet.functions import TailEnergy, evaluate_function, tail_energy, true_coefficients

logger = logging.getLogger(__name__)

_BLOCK_ESTIMATORS = {
    "truncated-block": truncated_block_threshold,
    "plain-block": plain_block_threshold,
}


class Scenario(BaseModel):
    """One simulation setting; ``gammas`` are swept on shared noise draws."""

    model_config = ConfigDict(frozen=True)

    function: FunctionSpec = Field(default_factory=FunctionSpec)
    n: int = 1024
    sigma: float = Field(default=0.1, gt=0)
    gammas: tuple[float, ...] = (7.0,)
    variant: Variant = "truncated-block"
    reps: int = Field(default=1000, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    block_zeroing: bool = True
    keep_coarse: bool = False
    beta: Optional[float] = None
    Q: Optional[float] = None
    lambda_mult: float = 1.0
    grid_size: Optional[int] = None
    collect_lj: bool = False

    def estimator_config(self, gamma: float) -> EstimatorConfig:
        return EstimatorConfig(
            gamma=gamma,
            variant=self.variant,
            beta=self.beta,
            Q=self.Q,
            lambda_mult=self.lambda_mult,
            block_zeroing=self.block_zeroing,
            keep_coarse=self.keep_coarse,
            coarse_max_level=settings.keep_coarse_max_level,
        )


@dataclass(frozen=True)
class _Context:
    function: FunctionSpec
    truth: CoefficientTree
    tail: TailEnergy
    partition: BlockPartition
    grid_size: int
    truth_values: np.ndarray


def _check_scenario(scenario: Scenario) -> None:
    if not is_power_of_two(scenario.n) or scenario.n < 4:
        raise SizingError(f"n must be a power of two >= 4, got {scenario.n}")
    if scenario.grid_size is not None and not is_power_of_two(scenario.grid_size):
        raise SizingError(f"grid size must be a power of two, got {scenario.grid_size}")


@lru_cache(maxsize=8)
def _context(payload: str) -> _Context:
    scenario = Scenario.model_validate_json(payload)
    J = dyadic_exponent(scenario.n)
    spec = scenario.function
    if spec.kind == "block-spike" and spec.block_len is None:
        spec = spec.model_copy(update={"block_len": block_length(scenario.n)})
    grid = scenario.grid_size or max(2 ** (J + 1), settings.linf_grid_min)
    tail = tail_energy(spec, J, settings.tail_extra_levels)
    logger.debug("tail energy above level %d: computed=%.3g bound=%.3g", J, tail.computed, tail.bound)
    return _Context(
        function=spec,
        truth=true_coefficients(spec, J),
        tail=tail,
        partition=level_partition(J, scenario.n),
        grid_size=grid,
        truth_values=evaluate_function(spec, grid),
    )


def run_repetition(scenario: Scenario, rep: int) -> tuple[list[RiskSample], list[Optional[np.ndarray]]]:
    """Risk samples for every gamma on the noise draw of repetition ``rep``."""
    ctx = _context(scenario.model_dump_json())
    obs = simulate(ctx.truth, scenario.n, scenario.sigma, SeedSpec(master_seed=scenario.master_seed, repetition_index=rep))
    event = check_event_T(standardized_residuals(obs, ctx.truth), ctx.partition, scenario.n)
    scaled = rescale_for_estimation(obs)
    block_fn = _BLOCK_ESTIMATORS.get(scenario.variant)
    energies = level_energies(scaled, ctx.partition) if block_fn else None

    samples: list[RiskSample] = []
    level_stats: list[Optional[np.ndarray]] = []
    for gamma in scenario.gammas:
        cfg = scenario.estimator_config(gamma)
        if block_fn:
            result = block_fn(scaled, cfg, energies)
        else:
            result = get_estimator(scenario.variant).estimate(scaled, cfg.at_unit_noise(scenario.sigma))
        coefficients = unscale_estimate(result.coefficients, scenario.sigma)
        samples.append(
            RiskSample(
                l2_sq=l2_risk(coefficients, ctx.truth, ctx.tail.total),
                linf=linf_risk(coefficients, ctx.function, ctx.grid_size, truth_values=ctx.truth_values),
                event_T=event,
                zeroed=result.total_zeroed,
            )
        )
        level_stats.append(result.stats.L if result.stats is not None else None)
    return samples, level_stats


def _run_chunk(scenario: Scenario, start: int, stop: int):
    return [run_repetition(scenario, rep) for rep in range(start, stop)]


def _lj_chunk(scenario: Scenario, start: int, stop: int) -> np.ndarray:
    ctx = _context(scenario.model_dump_json())
    rows = []
    for rep in range(start, stop):
        seed = SeedSpec(master_seed=scenario.master_seed, repetition_index=rep)
        scaled = rescale_for_estimation(simulate(ctx.truth, scenario.n, scenario.sigma, seed))
        rows.append(level_statistics(scaled, scenario.gammas[0], level_energies(scaled, ctx.partition)).L)
    return np.array(rows)


def _map_chunks(fn, scenario: Scenario, n_workers: int | None, chunk_size: int | None) -> list:
    size = chunk_size or settings.chunk_size
    starts = list(range(0, scenario.reps, size))
    stops = [min(start + size, scenario.reps) for start in starts]
    workers = n_workers or settings.n_workers
    if workers <= 1:
        return [fn(scenario, a, b) for a, b in zip(starts, stops)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, repeat(scenario), starts, stops))


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    if values.size < 2:
        return float(values.mean()), 0.0
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def _tabulate_L(rows: np.ndarray, block_len: int) -> dict[int, dict[str, float]]:
    """Empirical P(L_j = v) for v in 1..block_len and inf, per level."""
    reps = rows.shape[0]
    labels = [str(v) for v in range(1, block_len + 1)] + ["inf"]
    table: dict[int, dict[str, float]] = {}
    for i in range(rows.shape[1]):
        column = rows[:, i]
        counts = [int(np.count_nonzero(column == v)) for v in range(1, block_len + 1)]
        counts.append(int(np.count_nonzero(np.isinf(column))))
        if sum(counts) != reps:
            raise DomainError(f"level {i - 1}: L outside 1..{block_len} U inf")
        table[i - 1] = {label: count / reps for label, count in zip(labels, counts)}
    return table


def monte_carlo(
    scenario: Scenario,
    n_workers: int | None = None,
    chunk_size: int | None = None,
) -> list[RiskSummary]:
    """Mean and standard error of L2 and Linf risk, one summary per gamma."""
    _check_scenario(scenario)
    began = time.perf_counter()
    chunks = _map_chunks(_run_chunk, scenario, n_workers, chunk_size)
    outcomes = [outcome for chunk in chunks for outcome in chunk]

    summaries = []
    for g, gamma in enumerate(scenario.gammas):
        samples = [outcome[0][g] for outcome in outcomes]
        l2_mean, l2_se = _mean_se(np.array([s.l2_sq for s in samples]))
        linf_mean, linf_se = _mean_se(np.array([s.linf for s in samples]))
        lj = None
        if scenario.collect_lj and outcomes[0][1][g] is not None:
            lj = _tabulate_L(np.array([outcome[1][g] for outcome in outcomes]), block_length(scenario.n))
        summaries.append(
            RiskSummary(
                n=scenario.n,
                sigma=scenario.sigma,
                gamma=gamma,
                variant=scenario.variant,
                function=scenario.function.label(),
                reps=scenario.reps,
                l2_mean=l2_mean,
                l2_se=l2_se,
                linf_mean=linf_mean,
                linf_se=linf_se,
                se_degenerate=scenario.reps < 2,
                event_T_rate=float(np.mean([s.event_T for s in samples])),
                zeroed_mean=float(np.mean([s.zeroed for s in samples])),
                lj_distribution=lj,
            )
        )
    logger.info(
        "monte carlo n=%d sigma=%g variant=%s: %d reps x %d gammas in %.2fs",
        scenario.n, scenario.sigma, scenario.variant, scenario.reps, len(scenario.gammas),
        time.perf_counter() - began,
    )
    return summaries


def lj_distribution(
    scenario: Scenario,
    n_workers: int | None = None,
    chunk_size: int | None = None,
) -> dict[int, dict[str, float]]:
    """Empirical distribution of (L_j) at ``scenario.gammas[0]``."""
    _check_scenario(scenario)
    if scenario.reps < 100:
        raise DomainError(f"L_j distribution needs at least 100 repetitions, got {scenario.reps}")
    began = time.perf_counter()
    rows = np.vstack(_map_chunks(_lj_chunk, scenario, n_workers, chunk_size))
    logger.info("L_j distribution n=%d: %d reps in %.2fs", scenario.n, scenario.reps, time.perf_counter() - began)
    return _tabulate_L(rows, block_length(scenario.n))
