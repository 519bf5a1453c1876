"""
Command-line front end.

  tbt gamma-sweep   risk of the estimator as a function of gamma
  tbt lj-dist       empirical distribution of the level statistic L_j
  tbt rates         risk over a grid of sample sizes plus fitted rate exponents
  tbt denoise       truncated block thresholding of a user signal
  tbt rerun         re-execute a run from its manifest

Exit codes: 0 success, 2 usage error, 3 data error, 4 invariant violation.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from pathlib import Path
from typing import Sequence

import numpy as np
from pydantic import ValidationError

from config import settings
from domain.models import EstimatorConfig, FunctionSpec, is_power_of_two
from errors import BlockThresholdError, SizingError, StructureError
from blocks.statistics import cai_gamma
from estimators.factory import check_result, estimate
from risk.monte_carlo import Scenario, lj_distribution, monte_carlo
from risk.regression import rate_regression
from sequence.model import estimate_sigma_mad, observe_samples
from wavelet.haar import synthesize
from cli.manifest import RunManifest, read_manifest, write_manifest
from cli.output import (
    denoise_diag_frame,
    empty_diag_frame,
    gamma_sweep_frame,
    lj_frame,
    rates_frame,
    write_csv,
    write_signal,
)

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_DATA = 3


# ── argument types ────────────────────────────────────────────────────────────

def _power_of_two(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_power_of_two(value) or value < 4:
        raise argparse.ArgumentTypeError(f"{value} is not a power of two >= 4")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"{text} must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be >= 1")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _n_grid(text: str) -> list[int]:
    return [_power_of_two(part) for part in text.split(",") if part.strip()]


def _function(text: str) -> FunctionSpec:
    try:
        return FunctionSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def gamma_grid(gamma_min: float, gamma_max: float, step: float) -> list[float]:
    """Inclusive grid gamma_min, gamma_min + step, ..., gamma_max."""
    count = int(round((gamma_max - gamma_min) / step)) + 1
    return [round(gamma_min + i * step, 12) for i in range(count)]


# ── parser ────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=settings.master_seed)
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--workers", type=_positive_int, default=settings.n_workers)
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None)

    parser = argparse.ArgumentParser(prog="tbt", description=__doc__.splitlines()[1].strip())
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sweep = sub.add_parser("gamma-sweep", parents=[common], help="L2/Linf risk as a function of gamma")
    sweep.add_argument("--n", type=_power_of_two, default=2**10)
    sweep.add_argument("--sigma", type=_positive_float, default=0.1)
    sweep.add_argument("--gamma-min", type=_positive_float, default=3.0)
    sweep.add_argument("--gamma-max", type=_positive_float, default=15.0)
    sweep.add_argument("--gamma-step", type=_positive_float, default=0.5)
    sweep.add_argument("--reps", type=_positive_int, default=settings.default_reps)
    sweep.add_argument("--variant", choices=["truncated-block", "plain-block"], default="truncated-block")
    sweep.add_argument("--function", type=_function, default=FunctionSpec())
    sweep.add_argument("--no-block-zeroing", action="store_true")
    sweep.set_defaults(handler=cmd_gamma_sweep)

    lj = sub.add_parser("lj-dist", parents=[common], help="distribution of L_j")
    lj.add_argument("--n", type=_power_of_two, default=2**10)
    lj.add_argument("--sigma", type=_positive_float, default=0.1)
    lj.add_argument("--gamma", type=_positive_float, default=settings.default_gamma)
    lj.add_argument("--reps", type=_positive_int, default=settings.lj_reps)
    lj.add_argument("--function", type=_function, default=FunctionSpec())
    lj.set_defaults(handler=cmd_lj_dist)

    rates = sub.add_parser("rates", parents=[common], help="risk over a grid of n with fitted slopes")
    rates.add_argument("--n-grid", type=_n_grid, default=[2**k for k in range(8, 17)])
    rates.add_argument("--sigma", type=_positive_float, default=0.1)
    rates.add_argument("--gamma", type=_positive_float, default=settings.default_gamma)
    rates.add_argument("--reps", type=_positive_int, default=200)
    rates.add_argument("--function", type=_function, default=FunctionSpec())
    rates.add_argument("--variant", choices=["truncated-block", "plain-block", "hard"], default="truncated-block")
    rates.add_argument("--compare-variant", choices=["truncated-block", "plain-block", "hard"], default=None)
    rates.add_argument("--no-block-zeroing", action="store_true")
    rates.set_defaults(handler=cmd_rates)

    denoise = sub.add_parser("denoise", parents=[common], help="denoise a signal file")
    denoise.add_argument("--in", dest="input", type=Path, required=True)
    denoise.add_argument("--sigma", type=_positive_float, default=None)
    denoise.add_argument("--gamma", type=_positive_float, default=settings.default_gamma)
    denoise.add_argument("--variant", choices=["truncated-block", "plain-block", "hard"], default="truncated-block")
    denoise.add_argument("--block-zeroing", action="store_true")
    denoise.add_argument("--keep-coarse", action="store_true")
    denoise.set_defaults(handler=cmd_denoise)

    rerun = sub.add_parser("rerun", help="re-execute a run from its manifest")
    rerun.add_argument("manifest", type=Path)
    rerun.add_argument("--out", type=Path, default=None)
    rerun.set_defaults(handler=cmd_rerun)
    return parser


# ── subcommands ───────────────────────────────────────────────────────────────

def _params(args: argparse.Namespace) -> dict[str, str]:
    skip = {"handler", "subcommand"}
    return {key: (value.label() if isinstance(value, FunctionSpec) else str(value))
            for key, value in vars(args).items() if key not in skip}


def _finish(args: argparse.Namespace, argv: Sequence[str], began: float, extra: dict[str, str] | None = None) -> None:
    manifest = RunManifest(
        subcommand=args.subcommand,
        argv=list(argv),
        params=_params(args),
        master_seed=args.seed,
        duration_s=time.perf_counter() - began,
        extra=extra or {},
    )
    path = write_manifest(manifest, args.out)
    logger.info("wrote %s", path)


def cmd_gamma_sweep(args: argparse.Namespace, argv: Sequence[str]) -> int:
    began = time.perf_counter()
    gammas = gamma_grid(args.gamma_min, args.gamma_max, args.gamma_step)
    scenario = Scenario(
        function=args.function,
        n=args.n,
        sigma=args.sigma,
        gammas=tuple(gammas),
        variant=args.variant,
        reps=args.reps,
        master_seed=args.seed,
        block_zeroing=not args.no_block_zeroing,
    )
    summaries = monte_carlo(scenario, n_workers=args.workers)
    frame = gamma_sweep_frame(summaries)
    write_csv(frame, args.out / "gamma_sweep.csv")

    l2_best = float(frame.loc[frame["l2_rmse"].idxmin(), "gamma"])
    linf_best = float(frame.loc[frame["linf_mean"].idxmin(), "gamma"])
    logger.info("L2 risk minimal at gamma=%g, Linf at gamma=%g (blockwise James-Stein constant %.4f)",
                l2_best, linf_best, cai_gamma())
    _finish(args, argv, began, {"l2_argmin_gamma": f"{l2_best:g}", "linf_argmin_gamma": f"{linf_best:g}"})
    return 0


def cmd_lj_dist(args: argparse.Namespace, argv: Sequence[str]) -> int:
    began = time.perf_counter()
    scenario = Scenario(
        function=args.function,
        n=args.n,
        sigma=args.sigma,
        gammas=(args.gamma,),
        reps=args.reps,
        master_seed=args.seed,
    )
    write_csv(lj_frame(lj_distribution(scenario, n_workers=args.workers)), args.out / "lj_dist.csv")
    _finish(args, argv, began)
    return 0


def _rate_summaries(args: argparse.Namespace, variant: str) -> list:
    summaries = []
    for n in args.n_grid:
        scenario = Scenario(
            function=args.function,
            n=n,
            sigma=args.sigma,
            gammas=(args.gamma,),
            variant=variant,
            reps=args.reps,
            master_seed=args.seed,
            block_zeroing=not args.no_block_zeroing,
        )
        summaries.extend(monte_carlo(scenario, n_workers=args.workers))
    return summaries


def cmd_rates(args: argparse.Namespace, argv: Sequence[str]) -> int:
    began = time.perf_counter()
    summaries = _rate_summaries(args, args.variant)
    compare = _rate_summaries(args, args.compare_variant) if args.compare_variant else None
    write_csv(rates_frame(summaries, compare), args.out / "rates.csv")

    l2_fit = rate_regression(summaries, "l2")
    linf_fit = rate_regression(summaries, "linf")
    extra = {
        "l2_slope": f"{l2_fit.slope:.6f}",
        "l2_slope_se": f"{l2_fit.slope_se:.6f}",
        "linf_slope": f"{linf_fit.slope:.6f}",
        "linf_slope_se": f"{linf_fit.slope_se:.6f}",
    }
    print(" ".join(f"{key}={value}" for key, value in extra.items()))
    _finish(args, argv, began, extra)
    return 0


def _read_signal(path: Path) -> np.ndarray:
    try:
        values = np.loadtxt(path, dtype=float, ndmin=1)
    except ValueError as exc:
        raise StructureError(f"could not parse {path}: {exc}") from None
    if not is_power_of_two(values.size):
        raise SizingError(f"{path} holds {values.size} values, not a power of two")
    return values


def cmd_denoise(args: argparse.Namespace, argv: Sequence[str]) -> int:
    began = time.perf_counter()
    samples = _read_signal(args.input)
    sigma = args.sigma
    sigma_estimated = sigma is None
    if sigma_estimated:
        sigma = estimate_sigma_mad(samples)
        logger.warning("sigma not given; using the MAD estimate %.6g", sigma)

    diag_path = args.out / "denoise_diag.csv"
    if sigma <= 0:
        logger.warning("estimated noise level is zero; returning the signal unchanged")
        write_signal(samples, args.out / "denoised.txt")
        write_csv(empty_diag_frame(), diag_path)
    else:
        obs = observe_samples(samples, sigma)
        cfg = EstimatorConfig(
            gamma=args.gamma,
            variant=args.variant,
            block_zeroing=args.block_zeroing,
            keep_coarse=args.keep_coarse,
            coarse_max_level=settings.keep_coarse_max_level,
        )
        result = estimate(obs, cfg)
        check_result(obs, result, cfg.variant)
        denoised = synthesize(result.coefficients) * math.sqrt(samples.size)
        write_signal(denoised, args.out / "denoised.txt")
        write_csv(denoise_diag_frame(result), diag_path)

    _finish(args, argv, began, {"sigma": f"{sigma:.17g}", "sigma_estimated": str(sigma_estimated).lower()})
    return 0


def cmd_rerun(args: argparse.Namespace, argv: Sequence[str]) -> int:
    manifest = read_manifest(args.manifest)
    replay = list(manifest.argv)
    if args.out is not None:
        replay += ["--out", str(args.out)]
    logger.info("re-running %s from %s", manifest.subcommand, args.manifest)
    return main(replay)


# ── entry point ───────────────────────────────────────────────────────────────

def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(args, "log_level", None) or settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        if getattr(args, "out", None) is not None:
            args.out.mkdir(parents=True, exist_ok=True)
        return args.handler(args, argv)
    except BlockThresholdError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except ValidationError as exc:
        logger.error("invalid parameters: %s", exc)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
