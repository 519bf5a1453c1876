"""Tests for the block, projection and hard thresholding estimators."""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from domain.models import EstimatorConfig, FunctionSpec, NoisyCoefficients, SeedSpec
from errors import ConfigurationError, InvariantViolation
from blocks.statistics import detection_threshold, level_energies, phase_pattern
from estimators.block import clamp, plain_block_threshold, truncated_block_threshold
from estimators.factory import check_result, estimate, get_estimator
from estimators.hard import hard_threshold, universal_threshold
from estimators.projection import linf_cutoff, projection_cutoff, projection_estimator
from risk.monte_carlo import Scenario, run_repetition
from sequence.model import rescale_for_estimation, simulate
from wavelet.functions import true_coefficients

N = 1024
THEORY = EstimatorConfig(gamma=7.0, block_zeroing=False)


def _zero_levels(max_level: int) -> list[np.ndarray]:
    return [np.zeros(1)] + [np.zeros(2**j) for j in range(max_level + 1)]


def _draws(sine_truth, count: int, sigma: float = 0.1):
    for rep in range(count):
        obs = simulate(sine_truth, N, sigma, SeedSpec(master_seed=17, repetition_index=rep))
        yield rescale_for_estimation(obs)


# ── truncated / plain block thresholding ──────────────────────────────────────

def test_clamp_examples():
    np.testing.assert_allclose(clamp(np.array([0.5, -0.5, -0.2, 0.0]), 0.3), [0.3, -0.3, -0.2, 0.0])


def test_level_with_a_dominant_coefficient_passes_through(rng):
    levels = _zero_levels(10)
    levels[4] = rng.standard_normal(8) * 0.01
    levels[4][2] = 1.0
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    for fn in (truncated_block_threshold, plain_block_threshold):
        result = fn(obs, THEORY)
        assert result.stats.L[4] == 1
        np.testing.assert_array_equal(result.coefficients.levels[4], levels[4])


def test_silent_level_is_zeroed(rng):
    levels = _zero_levels(10)
    levels[8] = rng.standard_normal(128) * 1e-3
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    result = truncated_block_threshold(obs, THEORY)
    assert np.isinf(result.stats.L[8])
    np.testing.assert_array_equal(result.coefficients.levels[8], 0.0)
    assert result.zeroed[8] == 128


def test_middle_level_is_clamped_to_t():
    threshold = detection_threshold(7.0, N)
    levels = _zero_levels(10)
    levels[5][:3] = np.sqrt(np.array([0.6, 0.3, 0.2]) * threshold) * [1, -1, 1]
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    result = truncated_block_threshold(obs, THEORY)
    assert result.stats.L[5] == 3
    t = result.stats.t[5]
    assert t == pytest.approx(math.sqrt(threshold / 2))
    np.testing.assert_allclose(result.coefficients.levels[5][:3], [t, levels[5][1], levels[5][2]])
    assert result.clamped[5] == 1
    plain = plain_block_threshold(obs, THEORY)
    np.testing.assert_array_equal(plain.coefficients.levels[5], levels[5])


def test_truncation_and_zero_invariants(sine_truth):
    for scaled in _draws(sine_truth, 25):
        for cfg in (THEORY, EstimatorConfig(gamma=4.0, block_zeroing=True)):
            result = truncated_block_threshold(scaled, cfg)
            for d, L, t in zip(result.coefficients.levels, result.stats.L, result.stats.t):
                if np.isfinite(t):
                    assert np.all(np.abs(d) <= t)
                if np.isinf(L):
                    assert np.all(d == 0)
            check_result(scaled, result)


def test_plain_and_truncated_differ_only_on_middle_levels(sine_truth):
    for scaled in _draws(sine_truth, 25):
        truncated = truncated_block_threshold(scaled, THEORY)
        plain = plain_block_threshold(scaled, THEORY)
        np.testing.assert_array_equal(truncated.stats.L, plain.stats.L)
        for d_t, d_p, L in zip(truncated.coefficients.levels, plain.coefficients.levels, truncated.stats.L):
            if L == 1 or np.isinf(L):
                np.testing.assert_array_equal(d_t, d_p)


def test_block_zeroing_silences_quiet_blocks():
    threshold = detection_threshold(7.0, N)
    levels = _zero_levels(10)
    levels[5][0] = 1.0
    levels[5][7] = math.sqrt(threshold) * 0.5
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    kept = truncated_block_threshold(obs, THEORY)
    zeroed = truncated_block_threshold(obs, EstimatorConfig(gamma=7.0, block_zeroing=True))
    assert kept.coefficients.levels[5][7] == levels[5][7]
    assert zeroed.coefficients.levels[5][7] == 0.0
    assert zeroed.coefficients.levels[5][0] == 1.0


def test_keep_coarse_protects_low_levels(sine_truth):
    scaled = next(_draws(sine_truth, 1))
    result = truncated_block_threshold(scaled, EstimatorConfig(gamma=7.0, keep_coarse=True, coarse_max_level=2))
    assert result.protected_max_level == 2
    for i in range(4):
        np.testing.assert_array_equal(result.coefficients.levels[i], scaled.y[i])
    check_result(scaled, result)


def test_keep_coarse_clamps_but_never_zeroes_low_levels():
    T = detection_threshold(7.0, N)
    big, small = math.sqrt(0.6 * T), math.sqrt(0.25 * T)
    levels = _zero_levels(10)
    levels[3][:] = [big, small, -small, small]
    levels[2][:] = [1e-3, 0.0]
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    cfg = EstimatorConfig(gamma=7.0, keep_coarse=True, coarse_max_level=2, block_zeroing=True)
    result = truncated_block_threshold(obs, cfg)
    assert result.stats.L[3] == 3
    np.testing.assert_allclose(result.coefficients.levels[3], [math.sqrt(T / 2), small, -small, small])
    np.testing.assert_array_equal(result.coefficients.levels[2], [1e-3, 0.0])
    check_result(obs, result)

    unprotected = truncated_block_threshold(obs, cfg.model_copy(update={"keep_coarse": False}))
    np.testing.assert_array_equal(unprotected.coefficients.levels[2], [0.0, 0.0])


def test_shared_energies_give_identical_estimates(sine_truth):
    scaled = next(_draws(sine_truth, 1))
    energies = level_energies(scaled)
    a = truncated_block_threshold(scaled, THEORY)
    b = truncated_block_threshold(scaled, THEORY, energies)
    np.testing.assert_array_equal(a.coefficients.flat(), b.coefficients.flat())


# ── projection ────────────────────────────────────────────────────────────────

def test_projection_cutoffs():
    assert projection_cutoff(2**10, 1.0) == 3
    assert projection_cutoff(2**10, 50.0) == 0
    assert linf_cutoff(2**16, 1.0) == math.floor(math.log2(2**16 / math.log(2**16)) / 3)


def test_projection_keeps_small_coefficients_below_the_cutoff(rng):
    levels = [rng.uniform(-1e-6, 1e-6, level.size) for level in _zero_levels(10)]
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    result = projection_estimator(obs, beta=1.0, Q=1.0)
    for i, (y, d) in enumerate(zip(levels, result.coefficients.levels)):
        if i - 1 <= 3:
            np.testing.assert_array_equal(d, y)
        else:
            np.testing.assert_array_equal(d, 0.0)


def test_projection_clamps_to_the_holder_range():
    levels = _zero_levels(10)
    levels[3][:] = [5.0, -5.0, 0.0, 0.001]
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    result = projection_estimator(obs, beta=1.0, Q=1.0, c=0.5)
    bound = 0.5 * 2.0 ** (-2 * 1.5)
    np.testing.assert_allclose(result.coefficients.levels[3], [bound, -bound, 0.0, 0.001])


@pytest.mark.parametrize("sigma", [0.01, 1.0])
def test_projection_bound_does_not_depend_on_the_noise_level(sine_truth, sigma):
    obs = NoisyCoefficients(y=sine_truth.levels, n=N, sigma=sigma)
    result = estimate(obs, EstimatorConfig(variant="projection", beta=1.0, Q=10.0))
    direct = projection_estimator(obs, beta=1.0, Q=10.0)
    for d, expected in zip(result.coefficients.levels, direct.coefficients.levels):
        np.testing.assert_allclose(d, expected, rtol=1e-12, atol=1e-15)
    # c = 1 at Q = 10, so the level-0 coefficient 0.9003 is inside the range
    assert result.coefficients.levels[1][0] == pytest.approx(sine_truth.levels[1][0], rel=1e-12)


def test_projection_requires_beta_and_Q():
    with pytest.raises(ValidationError):
        EstimatorConfig(variant="projection")
    cfg = EstimatorConfig(variant="projection", beta=1.0, Q=1.0)
    assert get_estimator(cfg.variant).variant == "projection"


# ── hard thresholding ─────────────────────────────────────────────────────────

def test_hard_threshold_examples(rng):
    lam = universal_threshold(N, 1.0)
    levels = _zero_levels(10)
    levels[7][:] = rng.uniform(-0.5, 0.5, 64) * lam
    levels[7][5] = 2 * lam
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    result = hard_threshold(obs)
    expected = np.zeros(64)
    expected[5] = 2 * lam
    np.testing.assert_array_equal(result.coefficients.levels[7], expected)


def test_hard_threshold_vanishing_lambda_is_identity(rng):
    levels = [rng.standard_normal(level.size) for level in _zero_levels(10)]
    obs = NoisyCoefficients(y=levels, n=N, sigma=1.0)
    result = hard_threshold(obs, lambda_mult=1e-12)
    np.testing.assert_array_equal(result.coefficients.flat(), obs.as_tree().flat())


# ── factory ───────────────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "cfg",
    [
        EstimatorConfig(variant="truncated-block"),
        EstimatorConfig(variant="plain-block", block_zeroing=True),
        EstimatorConfig(variant="projection", beta=1.0, Q=1.0),
        EstimatorConfig(variant="hard", lambda_mult=0.8),
    ],
)
def test_every_variant_shrinks(sine_obs, cfg):
    result = estimate(sine_obs, cfg)
    check_result(sine_obs, result, cfg.variant)
    for y, d in zip(sine_obs.y, result.coefficients.levels):
        assert np.all(np.abs(d) <= np.abs(y) * (1 + 1e-12))
        assert np.all((d == 0) | (np.sign(d) == np.sign(y)))


def test_unknown_variant():
    with pytest.raises(ConfigurationError):
        get_estimator("soft")


def test_check_result_catches_violations(sine_obs):
    result = estimate(sine_obs, EstimatorConfig())
    levels = [d.copy() for d in result.coefficients.levels]
    levels[1] = -levels[1] if levels[1][0] != 0 else levels[1] + 1.0
    broken = result.model_copy(update={"coefficients": result.coefficients.model_copy(update={"levels": levels})})
    with pytest.raises(InvariantViolation):
        check_result(sine_obs, broken)


def test_larger_gamma_zeroes_more():
    scenario = Scenario(function=FunctionSpec(), n=N, sigma=0.1, gammas=(3.0, 15.0), reps=5, master_seed=8)
    total = [0, 0]
    for rep in range(scenario.reps):
        samples, _ = run_repetition(scenario, rep)
        assert samples[1].zeroed >= samples[0].zeroed
        total[0] += samples[0].zeroed
        total[1] += samples[1].zeroed
    assert total[1] > total[0]


@pytest.mark.slow
def test_phase_transitions_at_large_n():
    n = 2**16
    truth = true_coefficients(FunctionSpec(), 16)
    hits = 0
    for rep in range(100):
        obs = rescale_for_estimation(simulate(truth, n, 0.1, SeedSpec(master_seed=31, repetition_index=rep)))
        result = truncated_block_threshold(obs, THEORY)
        hits += phase_pattern(result.stats.L, start_level=2)
    assert hits >= 95
