"""Tests for the tbt command line: subcommands, CSV schemas, manifests and exit codes."""
import numpy as np
import pandas as pd
import pytest

import cli.main
from cli.main import gamma_grid, main
from cli.manifest import RunManifest, read_manifest
from cli.output import DENOISE_DIAG_COLUMNS, GAMMA_SWEEP_COLUMNS
from errors import StructureError

SWEEP_ARGS = ["gamma-sweep", "--n", "64", "--reps", "3", "--gamma-min", "3", "--gamma-max", "4", "--workers", "1"]


def test_default_gamma_grid():
    grid = gamma_grid(3.0, 15.0, 0.5)
    assert len(grid) == 25
    assert grid[0] == 3.0 and grid[-1] == 15.0


def test_gamma_sweep_writes_csv_and_manifest(tmp_path):
    assert main(SWEEP_ARGS + ["--out", str(tmp_path)]) == 0
    csv = tmp_path / "gamma_sweep.csv"
    assert csv.read_text().splitlines()[0] == ",".join(GAMMA_SWEEP_COLUMNS)
    frame = pd.read_csv(csv)
    assert list(frame["gamma"]) == [3.0, 3.5, 4.0]
    assert (frame["reps"] == 3).all()
    manifest = read_manifest(tmp_path / "gamma_sweep_manifest.txt")
    assert manifest.subcommand == "gamma-sweep"
    assert "l2_argmin_gamma" in manifest.extra


def test_same_seed_gives_byte_identical_csv(tmp_path):
    first, second, replay = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert main(SWEEP_ARGS + ["--seed", "42", "--out", str(first)]) == 0
    assert main(SWEEP_ARGS + ["--seed", "42", "--out", str(second)]) == 0
    assert (first / "gamma_sweep.csv").read_bytes() == (second / "gamma_sweep.csv").read_bytes()

    assert main(["rerun", str(first / "gamma_sweep_manifest.txt"), "--out", str(replay)]) == 0
    assert (first / "gamma_sweep.csv").read_bytes() == (replay / "gamma_sweep.csv").read_bytes()


def test_lj_dist_probabilities(tmp_path):
    assert main(["lj-dist", "--n", "64", "--reps", "100", "--workers", "1", "--out", str(tmp_path)]) == 0
    frame = pd.read_csv(tmp_path / "lj_dist.csv", dtype={"L_value": str})
    assert set(frame["L_value"]) <= {"1", "2", "3", "4", "5", "inf"}
    totals = frame.groupby("level")["probability"].sum()
    np.testing.assert_allclose(totals.to_numpy(), 1.0, atol=1e-12)
    assert list(totals.index) == list(range(-1, 7))


def test_rates_prints_slopes(tmp_path, capsys):
    argv = ["rates", "--n-grid", "64,128", "--reps", "2", "--workers", "1", "--compare-variant", "plain-block"]
    assert main(argv + ["--out", str(tmp_path)]) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("l2_slope=")
    assert "linf_slope_se=" in line
    frame = pd.read_csv(tmp_path / "rates.csv")
    assert list(frame["n"]) == [64, 128]
    assert {"cmp_l2_mse", "cmp_linf_mean", "linf_ratio"} <= set(frame.columns)


def test_denoise_zero_signal_passes_through(tmp_path, mocker):
    signal = tmp_path / "zeros.txt"
    np.savetxt(signal, np.zeros(32))
    spy = mocker.spy(cli.main, "estimate_sigma_mad")
    assert main(["denoise", "--in", str(signal), "--out", str(tmp_path)]) == 0
    assert spy.call_count == 1
    np.testing.assert_array_equal(np.loadtxt(tmp_path / "denoised.txt"), np.zeros(32))
    diag = (tmp_path / "denoise_diag.csv").read_text().splitlines()
    assert diag == [",".join(DENOISE_DIAG_COLUMNS)]
    assert read_manifest(tmp_path / "denoise_manifest.txt").extra["sigma_estimated"] == "true"


def test_denoise_with_tiny_sigma_returns_the_input(tmp_path, mocker):
    x = (np.arange(64) + 0.5) / 64
    values = np.sqrt(2) * np.sin(2 * np.pi * x)
    signal = tmp_path / "sine.txt"
    np.savetxt(signal, values, fmt="%.17g")
    spy = mocker.spy(cli.main, "estimate_sigma_mad")
    assert main(["denoise", "--in", str(signal), "--sigma", "1e-9", "--out", str(tmp_path)]) == 0
    assert spy.call_count == 0
    np.testing.assert_allclose(np.loadtxt(tmp_path / "denoised.txt"), values, atol=1e-6)
    diag = pd.read_csv(tmp_path / "denoise_diag.csv")
    assert list(diag["level"]) == list(range(-1, 6))


def test_denoised_sine_is_closer_than_the_noise(tmp_path):
    x = (np.arange(1024) + 0.5) / 1024
    truth = np.sqrt(2) * np.sin(2 * np.pi * x)
    rng = np.random.default_rng(11)
    for rep in range(100):
        noise = 0.1 * rng.standard_normal(truth.size)
        signal = tmp_path / f"noisy_{rep}.txt"
        np.savetxt(signal, truth + noise, fmt="%.17g")
        out = tmp_path / f"run_{rep}"
        assert main(["denoise", "--in", str(signal), "--out", str(out)]) == 0
        error = np.abs(np.loadtxt(out / "denoised.txt") - truth).max()
        assert error < np.abs(noise).max()


def test_denoise_rejects_bad_input(tmp_path):
    signal = tmp_path / "six.txt"
    np.savetxt(signal, np.ones(6))
    assert main(["denoise", "--in", str(signal), "--sigma", "0.1", "--out", str(tmp_path)]) == 3
    assert main(["denoise", "--in", str(tmp_path / "missing.txt"), "--out", str(tmp_path)]) == 3


def test_invalid_n_is_a_usage_error(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(["gamma-sweep", "--n", "100", "--out", str(tmp_path)])
    assert excinfo.value.code == 2


def test_manifest_text_round_trip():
    manifest = RunManifest(
        subcommand="rates",
        argv=["rates", "--n-grid", "64,128", "--out", "dir with space"],
        params={"sigma": "0.1"},
        master_seed=7,
        duration_s=1.5,
        extra={"l2_slope": "-0.66"},
    )
    parsed = RunManifest.from_text(manifest.to_text())
    assert parsed.argv == manifest.argv
    assert parsed.params == manifest.params
    assert parsed.extra == manifest.extra
    assert parsed.master_seed == 7


def test_malformed_manifest():
    with pytest.raises(StructureError):
        RunManifest.from_text("argv=rates\nversion=0.1.0\n")
