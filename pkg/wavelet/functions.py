"""
Target functions: exact Haar coefficients, grid evaluation and L2 tail energy.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from domain.models import CoefficientTree, FunctionSpec, dyadic_exponent, is_power_of_two
from errors import ConfigurationError, InvariantViolation, SizingError
from wavelet.haar import analyze, evaluate_expansion, resize_tree

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

# 2 pi^2 / 3 * 4^{-(M+1)} bounds the sine's energy above level M.
_SINE_TAIL_CONSTANT = 2.0 * math.pi**2 / 3.0


# ── sine ──────────────────────────────────────────────────────────────────────

def sine_values(x: np.ndarray) -> np.ndarray:
    return SQRT2 * np.sin(2.0 * math.pi * x)


def sine_antiderivative(x: np.ndarray) -> np.ndarray:
    return -SQRT2 * np.cos(2.0 * math.pi * x) / (2.0 * math.pi)


def sine_level(j: int) -> np.ndarray:
    """d_{j,k} for f = sqrt(2) sin(2 pi .).

    Integrating against psi_{j,k} with the antiderivative collapses to
    -2^{j/2} (2 sqrt(2)/pi) sin^2(pi h/2) cos(2 pi (a + h/2)), h = 2^-j, a = k h,
    which avoids the cancellation of differencing F at fine levels.
    """
    if j == -1:
        return np.array([sine_antiderivative(1.0) - sine_antiderivative(0.0)])
    h = 2.0**-j
    centers = (np.arange(2**j) + 0.5) * h
    scale = 2.0 ** (j / 2) * (2.0 * SQRT2 / math.pi) * math.sin(math.pi * h / 2) ** 2
    return -scale * np.cos(2.0 * math.pi * centers)


# ── block-spike ───────────────────────────────────────────────────────────────

def holder_proxy(values: np.ndarray, beta: float, max_lag: int = 4) -> float:
    """sup|f| plus the largest finite-difference Hoelder quotient on a midpoint grid."""
    grid = values.size
    exponent = min(beta, 1.0)
    quotient = 0.0
    for lag in range(1, min(max_lag, grid - 1) + 1):
        diffs = np.abs(values[lag:] - values[:-lag])
        quotient = max(quotient, float(diffs.max()) / (lag / grid) ** exponent)
    return float(np.abs(values).max()) + quotient


def holder_constant(beta: float, Q: float) -> float:
    """Heuristic c(beta, Q) = Q / (2 * proxy of the mother wavelet)."""
    psi_proxy = holder_proxy(np.array([1.0, -1.0]), beta)
    return Q / (2.0 * psi_proxy)


def spike_amplitude(c: float, beta: float, level: int) -> float:
    return c * 2.0 ** (-level * (2.0 * beta + 1.0) / 2.0)


def spike_indices(level: int, block_len: int) -> np.ndarray:
    """Indices covered by the full-length blocks of ``level``."""
    full_blocks = 2**level // block_len
    return np.arange(full_blocks * block_len)


def _spike_tree(spec: FunctionSpec, block_len: int, c: float, max_level: int) -> CoefficientTree:
    tree = CoefficientTree.zeros(max(max_level, spec.level))
    tree.levels[spec.level + 1][spike_indices(spec.level, block_len)] = spike_amplitude(c, spec.beta, spec.level)
    return resize_tree(tree, max_level)


def calibrate_spike(spec: FunctionSpec, block_len: int, max_halvings: int = 60) -> float:
    """Find c so the generated function passes the Hoelder proxy check against Q."""
    c = holder_constant(spec.beta, spec.Q)
    grid = 2 ** (spec.level + 1)
    for _ in range(max_halvings):
        values = evaluate_expansion(_spike_tree(spec, block_len, c, spec.level), grid)
        proxy = holder_proxy(values, spec.beta)
        if proxy <= spec.Q:
            return c
        logger.debug("block-spike proxy %.4g exceeds Q=%.4g at c=%.4g, halving", proxy, spec.Q, c)
        c /= 2.0
    raise InvariantViolation(f"could not certify c(beta={spec.beta}, Q={spec.Q})")


def _resolve_block_len(spec: FunctionSpec, block_len: int | None) -> int:
    resolved = block_len if block_len is not None else spec.block_len
    if resolved is None:
        raise ConfigurationError("block-spike needs a block length")
    return resolved


# ── samples ───────────────────────────────────────────────────────────────────

def load_samples(spec: FunctionSpec) -> np.ndarray:
    values = np.loadtxt(spec.path, dtype=float, ndmin=1)
    if not is_power_of_two(values.size):
        raise SizingError(f"{spec.path} holds {values.size} values, not a power of two")
    return values


# ── public API ────────────────────────────────────────────────────────────────

def true_coefficients(spec: FunctionSpec, max_level: int, block_len: int | None = None) -> CoefficientTree:
    """Exact Haar coefficients of ``spec`` on levels -1..max_level."""
    if spec.kind == "sine":
        return CoefficientTree(levels=[sine_level(j) for j in range(-1, max_level + 1)])
    if spec.kind == "block-spike":
        resolved = _resolve_block_len(spec, block_len)
        if 2**spec.level < resolved:
            logger.warning("level %d has no full block of length %d; block-spike is zero", spec.level, resolved)
        c = calibrate_spike(spec, resolved)
        tree = _spike_tree(spec, resolved, c, max_level)
        return CoefficientTree(levels=tree.levels, metadata={"c": c})
    if spec.kind == "samples":
        values = load_samples(spec)
        tree = analyze(values).scaled(values.size**-0.5)
        return resize_tree(tree, max_level)
    raise ConfigurationError(f"unknown function kind {spec.kind!r}")


def evaluate_function(spec: FunctionSpec, grid_size: int, block_len: int | None = None) -> np.ndarray:
    """f at the midpoints of a uniform grid of ``grid_size`` cells."""
    if not is_power_of_two(grid_size):
        raise SizingError(f"grid size must be a power of two, got {grid_size}")
    if spec.kind == "sine":
        return sine_values((np.arange(grid_size) + 0.5) / grid_size)
    if spec.kind == "block-spike":
        tree = true_coefficients(spec, spec.level, block_len)
        return evaluate_expansion(tree, grid_size)
    if spec.kind == "samples":
        values = load_samples(spec)
        idx = ((2 * np.arange(grid_size) + 1) * values.size) // (2 * grid_size)
        return values[idx]
    raise ConfigurationError(f"unknown function kind {spec.kind!r}")


@dataclass(frozen=True)
class TailEnergy:
    """Energy of the coefficients above the estimation level J."""

    computed: float
    bound: float
    cutoff_level: int

    @property
    def total(self) -> float:
        return self.computed + self.bound


def tail_energy(spec: FunctionSpec, max_level: int, extra_levels: int = 8, block_len: int | None = None) -> TailEnergy:
    """Sum of d^2 over levels above ``max_level``.

    Computed exactly up to max_level + extra_levels. For the sine the rest is
    covered by the certified geometric bound; the other kinds have finite expansions.
    """
    cutoff = max_level + extra_levels
    if spec.kind == "sine":
        computed = sum(float(np.dot(d, d)) for d in map(sine_level, range(max_level + 1, cutoff + 1)))
        return TailEnergy(computed, _SINE_TAIL_CONSTANT * 4.0 ** -(cutoff + 1), cutoff)
    if spec.kind == "block-spike":
        if spec.level <= max_level:
            return TailEnergy(0.0, 0.0, spec.level)
        tree = true_coefficients(spec, spec.level, block_len)
        return TailEnergy(float(np.dot(tree.levels[-1], tree.levels[-1])), 0.0, spec.level)
    if spec.kind == "samples":
        values = load_samples(spec)
        finest = dyadic_exponent(values.size) - 1
        tree = analyze(values).scaled(values.size**-0.5)
        computed = sum(float(np.dot(d, d)) for d in tree.levels[max_level + 2 :])
        return TailEnergy(computed, 0.0, max(finest, max_level))
    raise ConfigurationError(f"unknown function kind {spec.kind!r}")
