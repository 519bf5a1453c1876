"""
Gaussian sequence model of the white-noise regression problem.

Noise comes from a Philox counter-based generator keyed on
(master_seed, repetition_index); eps_{j,k} is the draw at position
2^j + k (level -1 at position 0) of that stream, so a repetition's noise does
not depend on which worker runs it or in which order.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from config import settings
from domain.models import CoefficientTree, NoisyCoefficients, SeedSpec, dyadic_exponent, is_power_of_two
from errors import DomainError, SizingError
from wavelet.haar import analyze, resize_tree

logger = logging.getLogger(__name__)


def noise_generator(seed: SeedSpec) -> np.random.Generator:
    key = np.random.SeedSequence([seed.master_seed, seed.repetition_index])
    return np.random.Generator(np.random.Philox(key))


def _split_levels(flat: np.ndarray, max_level: int) -> list[np.ndarray]:
    return [flat[:1]] + [flat[2**j : 2 ** (j + 1)] for j in range(max_level + 1)]


def _check_noise_level(sigma: float) -> None:
    if not math.isfinite(sigma) or sigma <= 0:
        raise DomainError(f"sigma must be finite and positive, got {sigma}")


def simulate(truth: CoefficientTree, n: int, sigma: float, seed: SeedSpec) -> NoisyCoefficients:
    """Draw Y_{j,k} = d_{j,k} + sigma n^{-1/2} eps_{j,k} for levels -1..log2(n)."""
    if not is_power_of_two(n):
        raise SizingError(f"n must be a power of two, got {n}")
    _check_noise_level(sigma)
    J = dyadic_exponent(n)
    d = resize_tree(truth, J).flat()
    eps = noise_generator(seed).standard_normal(d.size)
    return NoisyCoefficients(y=_split_levels(d + sigma / math.sqrt(n) * eps, J), n=n, sigma=sigma)


def standardized_residuals(obs: NoisyCoefficients, truth: CoefficientTree) -> list[np.ndarray]:
    """sqrt(n) (Y - d) / sigma per level; recovers eps up to rounding."""
    d = resize_tree(truth, obs.max_level)
    scale = math.sqrt(obs.n) / obs.sigma
    return [(y - level) * scale for y, level in zip(obs.y, d.levels)]


def rescale_for_estimation(obs: NoisyCoefficients) -> NoisyCoefficients:
    """Observations divided by sigma, reported at unit noise level."""
    if obs.sigma == 1.0:
        return obs
    return NoisyCoefficients(y=[y / obs.sigma for y in obs.y], n=obs.n, sigma=1.0)


def unscale_estimate(tree: CoefficientTree, sigma: float) -> CoefficientTree:
    _check_noise_level(sigma)
    if sigma == 1.0:
        return tree
    return tree.scaled(sigma)


def estimate_sigma_mad(samples: np.ndarray, constant: float | None = None) -> float:
    """Noise level of sampled data: MAD of the finest detail coefficients.

    Discrete finest-level coefficients of f(x_i) + sigma z_i carry noise of
    standard deviation sigma, so no further rescaling is needed.
    """
    values = np.asarray(samples, dtype=float)
    if values.size < 2:
        raise SizingError("need at least two samples to estimate sigma")
    finest = analyze(values).levels[-1]
    sigma_hat = (constant or settings.mad_constant) * float(np.median(np.abs(finest)))
    logger.info("estimated sigma=%.6g from %d finest coefficients (MAD)", sigma_hat, finest.size)
    return sigma_hat


def observe_samples(samples: np.ndarray, sigma: float) -> NoisyCoefficients:
    """Sequence-space observations of N sampled values: DWT scaled by N^{-1/2}."""
    values = np.asarray(samples, dtype=float)
    tree = analyze(values).scaled(values.size**-0.5)
    return NoisyCoefficients(y=tree.levels, n=values.size, sigma=sigma)
