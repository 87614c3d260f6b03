import json
import os

import numpy as np
import pytest

from jacobi.bordered import BorderedJacobi
from laws.level_density import LawSpec, moment
from rmt_experiment import (
    ExperimentConfig,
    kernel_smooth,
    normal_moments,
    random_bordered_jacobi,
    round_trip_parameters,
    run_figure2,
    run_figure3,
    run_figure4,
    sample_shifted_wishart_eigs,
    silverman_bandwidth,
)


class TestExperimentConfig:
    def test_defaults_are_valid(self):
        assert ExperimentConfig().validate()

    @pytest.mark.parametrize("changes", [
        {"m": 10, "n": 5},
        {"m": 1, "n": 5},
        {"lanczos_steps": 0},
        {"bandwidth": -0.1},
        {"bandwidth": "wide"},
        {"seed": -1},
        {"grid_size": 8},
        {"diagnostic_steps": 1},
    ])
    def test_invalid(self, changes):
        with pytest.raises(ValueError):
            ExperimentConfig(**changes).validate()


class TestShiftedWishart:
    def test_zero_noise(self):
        cfg = ExperimentConfig(m=4, n=6, mu_shift=5.0)
        eigs = sample_shifted_wishart_eigs(cfg, noise=np.zeros((4, 6)))
        np.testing.assert_allclose(eigs, 25.0)

    def test_noise_shape_checked(self):
        with pytest.raises(ValueError):
            sample_shifted_wishart_eigs(ExperimentConfig(m=4, n=6), noise=np.zeros((6, 4)))

    def test_deterministic(self):
        cfg = ExperimentConfig(seed=11, m=50, n=80)
        np.testing.assert_array_equal(sample_shifted_wishart_eigs(cfg), sample_shifted_wishart_eigs(cfg))

    def test_sorted(self):
        eigs = sample_shifted_wishart_eigs(ExperimentConfig(seed=3, m=60, n=90))
        assert eigs.size == 60
        assert np.all(np.diff(eigs) >= 0)

    def test_square_unshifted_is_marchenko_pastur(self):
        cfg = ExperimentConfig(seed=2, m=400, n=400, mu_shift=0.0)
        eigs = sample_shifted_wishart_eigs(cfg)
        for n in range(1, 4):
            assert abs(np.mean(eigs**n) - moment(LawSpec.marchenko_pastur(1), n)) <= 5 / np.sqrt(cfg.m)

    def test_mean_eigenvalue(self):
        cfg = ExperimentConfig(seed=1)
        eigs = sample_shifted_wishart_eigs(cfg)
        assert np.mean(eigs) == pytest.approx(cfg.n / cfg.m + cfg.mu_shift**2, abs=0.1)


class TestKernelSmooth:
    def test_symmetric_pair(self):
        mu = kernel_smooth(np.array([-1.0, 1.0]), 0.1, 512)
        assert mu.mean() == pytest.approx(0.0, abs=1e-12)
        assert mu.points[0] == pytest.approx(-1.3)
        assert mu.points[-1] == pytest.approx(1.3)

    def test_weights_form_a_measure(self):
        mu = kernel_smooth(np.random.default_rng(0).normal(size=100))
        assert mu.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(mu.weights >= 0)

    def test_smoothing_adds_bandwidth_variance(self):
        samples = np.random.default_rng(4).normal(size=500)
        h = silverman_bandwidth(samples)
        mu = kernel_smooth(samples, "auto", 2048)
        assert mu.mean() == pytest.approx(np.mean(samples), abs=1e-3)
        variance = mu.moment(2) - mu.mean() ** 2
        assert variance == pytest.approx(np.var(samples) + h**2, rel=1e-2)

    def test_silverman(self):
        samples = np.array([0.0, 1.0, 2.0, 3.0])
        expected = 1.06 * np.std(samples, ddof=1) * 4 ** (-0.2)
        assert silverman_bandwidth(samples) == pytest.approx(expected)

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            kernel_smooth(np.array([1.0]))
        with pytest.raises(ValueError):
            silverman_bandwidth(np.array([2.0, 2.0]))


class TestNormalMoments:
    def test_values(self):
        np.testing.assert_array_equal(normal_moments(5).moments, [1, 0, 1, 0, 3])
        assert normal_moments(7).moments[6] == 15

    def test_count_checked(self):
        with pytest.raises(ValueError):
            normal_moments(1)


class TestRandomBorderedJacobi:
    def test_shape_and_dominance(self):
        j = random_bordered_jacobi(8, 5)
        assert j.k == 5
        alphas, betas = j.alphas(6), j.betas(6)
        assert np.all(betas >= np.abs(alphas))
        assert np.all(np.abs(alphas) < 1)

    def test_deterministic(self):
        assert random_bordered_jacobi(3, 3) == random_bordered_jacobi(3, 3)


class TestFigure2:
    @pytest.mark.slow
    @pytest.mark.parametrize("k", [3, 5])
    @pytest.mark.parametrize("seed", range(20))
    def test_round_trip(self, seed, k):
        report = run_figure2(seed, k)
        assert report.ok
        assert report.metrics["min_raw_density"] >= -1e-9
        assert report.metrics["total_mass"] == pytest.approx(1.0, abs=1e-3)
        if report.metrics["atom_count"] == 0:
            assert not report.metrics["round_trip_skipped"]
            assert report.metrics["parameter_error"] <= 1e-4
        else:
            assert report.metrics["round_trip_skipped"]

    def test_atom_next_to_pole_skips_round_trip(self):
        report = run_figure2(11, 5)
        assert report.ok
        assert report.metrics["atom_count"] >= 1
        assert report.metrics["round_trip_skipped"]
        assert report.metrics["total_mass"] == pytest.approx(1.0, abs=1e-3)

    def test_round_trip_parameters(self):
        j = BorderedJacobi((0.1, -0.1), (0.9, 1.05), 0.0, 1.0)
        alphas, betas = round_trip_parameters(j, 5)
        np.testing.assert_allclose(alphas, j.alphas(5), atol=1e-6)
        np.testing.assert_allclose(betas, j.betas(5), atol=1e-6)

    def test_failure_is_reported(self):
        report = run_figure2(0, -1)
        assert not report.ok
        assert isinstance(report.failure, ValueError)
        assert report.errors[0].startswith("ValueError")

    def test_write(self, tmp_path):
        report = run_figure2(7, 3, grid_size=64)
        paths = report.write(str(tmp_path))
        assert [os.path.basename(p) for p in paths] == ["figure2_7.json", "figure2_7.csv"]
        with open(paths[0]) as f:
            payload = json.load(f)
        assert payload["figure"] == 2
        assert payload["jacobi"]["k"] == 3


class TestFigure3:
    @pytest.mark.slow
    def test_recovers_smoothed_histogram(self):
        report = run_figure3(ExperimentConfig(seed=1, m=400, n=1200, mu_shift=5.0, lanczos_steps=5))
        assert report.ok
        assert report.metrics["l1"] <= 0.05
        assert report.metrics["toeplitz_distance"] <= 0.05
        assert report.metrics["eigenvalue_mean"] == pytest.approx(28.0, abs=0.1)
        assert list(report.curves.columns) == ["x", "smoothed", "recovered"]


class TestFigure4:
    def test_twenty_moments(self):
        report = run_figure4(ExperimentConfig(moment_count=20))
        assert report.ok
        assert report.metrics["steps"] == 9
        assert report.metrics["l1"] <= 0.05
        assert report.metrics["total_mass"] == pytest.approx(1.0, abs=0.02)
        assert np.all(report.curves["recovered"] >= 0)

    def test_more_moments_help(self):
        ten = run_figure4(ExperimentConfig(moment_count=10))
        twenty = run_figure4(ExperimentConfig(moment_count=20))
        assert twenty.metrics["l1"] < ten.metrics["l1"]

    def test_too_few_moments(self):
        report = run_figure4(ExperimentConfig(moment_count=2))
        assert not report.ok
