"""Tests for the noisy oracle, problems and run configuration."""

import math

import numpy as np
import pytest

from simplexgrad import (
    ConfigError,
    DfoConfig,
    DimensionMismatchError,
    NoiseModel,
    NoisyOracle,
    Variant,
    BoundKind,
)
from simplexgrad.problems import PROBLEMS, get_problem


def _quadratic(u):
    return float(u @ u)


class TestNoisyOracle:
    """Tests for NoisyOracle."""

    def test_noiseless(self):
        """Without noise the oracle returns f exactly and counts evaluations."""
        oracle = NoisyOracle(_quadratic)
        assert oracle([1.0, 2.0]) == 5.0
        assert oracle([0.0, 0.0]) == 0.0
        assert oracle.eval_count == 2

    def test_seeded(self):
        """Equal seeds give equal noise sequences."""
        a = NoisyOracle(_quadratic, NoiseModel.GAUSSIAN, sigma_f=0.1, seed=4)
        b = NoisyOracle(_quadratic, NoiseModel.GAUSSIAN, sigma_f=0.1, seed=4)
        c = NoisyOracle(_quadratic, NoiseModel.GAUSSIAN, sigma_f=0.1, seed=5)
        first = [a([1.0]) for _ in range(5)]
        assert first == [b([1.0]) for _ in range(5)]
        assert first != [c([1.0]) for _ in range(5)]

    def test_default_delta(self):
        """delta defaults to three standard deviations."""
        oracle = NoisyOracle(_quadratic, NoiseModel.GAUSSIAN, sigma_f=0.05)
        assert oracle.delta == pytest.approx(0.15)

    def test_truncated_within_bound(self):
        """Truncated Gaussian noise never exceeds delta."""
        oracle = NoisyOracle(_quadratic, NoiseModel.TRUNCATED_GAUSSIAN, sigma_f=1.0, delta=0.5, seed=1)
        draws = np.array([oracle.noise() for _ in range(500)])
        assert np.all(np.abs(draws) <= 0.5)
        assert np.std(draws) > 0

    def test_truncated_narrow_bound(self):
        """A bound far inside one standard deviation still draws promptly."""
        oracle = NoisyOracle(_quadratic, NoiseModel.TRUNCATED_GAUSSIAN, sigma_f=1.0, delta=1e-6, seed=1)
        draws = np.array([oracle.noise() for _ in range(2000)])
        assert np.all(np.abs(draws) <= 1e-6)
        assert oracle.eval_count == 0

    def test_uniform_within_bound(self):
        """Uniform noise stays inside [-delta, delta]."""
        oracle = NoisyOracle(_quadratic, NoiseModel.UNIFORM_BOUNDED, delta=0.2, seed=2)
        draws = np.array([oracle.noise() for _ in range(500)])
        assert np.all(np.abs(draws) <= 0.2)
        assert draws.min() < -0.1 and draws.max() > 0.1

    def test_gaussian_spread(self):
        """Gaussian noise has roughly the configured standard deviation."""
        oracle = NoisyOracle(_quadratic, "gaussian", sigma_f=0.1, seed=3)
        draws = np.array([oracle.noise() for _ in range(4000)])
        assert np.std(draws) == pytest.approx(0.1, rel=0.1)

    def test_unknown_model(self):
        """An unknown noise model is a configuration error."""
        with pytest.raises(ConfigError):
            NoisyOracle(_quadratic, "laplace")

    def test_negative_sigma(self):
        """sigma_f must be nonnegative."""
        with pytest.raises(ConfigError):
            NoisyOracle(_quadratic, NoiseModel.GAUSSIAN, sigma_f=-1.0)


class TestProblems:
    """Tests for the registered objectives."""

    @pytest.mark.parametrize("name", sorted(PROBLEMS))
    def test_gradient_matches_differences(self, name):
        """Analytic gradients agree with central differences."""
        problem = get_problem(name)
        rng = np.random.default_rng(6)
        u = rng.uniform(-0.5, 0.5, problem.dimension) + 1.0
        h = 1e-6
        numeric = [
            (problem(u + h * e) - problem(u - h * e)) / (2 * h) for e in np.eye(problem.dimension)
        ]
        assert problem.gradient(u) == pytest.approx(numeric, rel=1e-5, abs=1e-6)

    def test_example5_lipschitz(self):
        """The indefinite quadratic's L is its Hessian spectral radius."""
        assert get_problem("example5").lipschitz == pytest.approx(4.3014, abs=1e-3)

    def test_case1_minimizer(self):
        """The numerical minimizer of the first case study has zero gradient."""
        problem = get_problem("case1")
        assert np.linalg.norm(problem.gradient(problem.minimizer())) < 1e-6

    def test_sphere_dimension(self):
        """The sphere takes its dimension from the request."""
        problem = get_problem("sphere", dimension=4)
        assert problem.dimension == 4
        assert problem([1.0, 1.0, 1.0, 1.0]) == pytest.approx(4.0)

    def test_dimension_check(self):
        """Fixed-dimension problems refuse other dimensions."""
        with pytest.raises(ConfigError):
            get_problem("case2", dimension=2)
        with pytest.raises(DimensionMismatchError):
            get_problem("case1")([1.0, 2.0, 3.0])

    def test_unknown(self):
        """Unknown names are configuration errors."""
        with pytest.raises(ConfigError):
            get_problem("rosenbrock")


class TestDfoConfig:
    """Tests for DfoConfig."""

    def test_defaults(self):
        """delta defaults to 3 sigma_f and the step to h*."""
        config = DfoConfig(lipschitz=2.5, sigma_f=0.05)
        assert config.variant is Variant.SIMPLEX
        assert config.delta == pytest.approx(0.15)
        assert config.init_step == pytest.approx(2 * math.sqrt(0.15 / 2.5))
        assert config.noise_model is NoiseModel.GAUSSIAN
        assert config.max_iters == 60
        assert config.budget_divisor == 4.0

    def test_variant_kind(self):
        """Variant 1a uses the radial bound and 1b the simplex bound."""
        assert Variant("1a").bound_kind is BoundKind.RADIAL
        assert Variant("1b").bound_kind is BoundKind.SIMPLEX

    def test_budget_floor(self):
        """The floor is E*_FFD, or the bound of the initial FFD simplex without noise."""
        assert DfoConfig(lipschitz=2.0, delta=0.01).budget_floor(2) == pytest.approx(0.4)
        quiet = DfoConfig(lipschitz=2.0, delta=0.0, init_step=0.1, step_tolerance=1e-3)
        assert quiet.budget_floor(2) == pytest.approx(math.sqrt(2.0) * 0.1)

    def test_zero_delta_needs_step(self):
        """Without noise the initial step must be given."""
        with pytest.raises(ConfigError):
            DfoConfig(lipschitz=2.0, delta=0.0)

    def test_from_dict(self):
        """Keys map onto fields; L maps to lipschitz."""
        config = DfoConfig.from_dict(
            {"variant": "1a", "L": 5.3, "delta": 0.3, "sigma_f": 0.1, "u0": [-2, -2.5], "objective": "case1"}
        )
        assert config.variant is Variant.RADIAL
        assert config.lipschitz == 5.3
        assert config.u0 == [-2.0, -2.5]
        assert DfoConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()

    def test_unknown_key(self):
        """Unknown keys are rejected unless ignored explicitly."""
        data = {"L": 1.0, "delta": 0.1, "colour": "blue"}
        with pytest.raises(ConfigError):
            DfoConfig.from_dict(data)
        assert DfoConfig.from_dict(data, ignore_unknown=True).lipschitz == 1.0

    def test_missing_lipschitz(self):
        """L is required."""
        with pytest.raises(ConfigError):
            DfoConfig.from_dict({"delta": 0.1})

    @pytest.mark.parametrize(
        "data",
        [
            {"L": 0.0, "delta": 0.1},
            {"L": "fast", "delta": 0.1},
            {"L": 1.0, "delta": 0.1, "variant": "2"},
            {"L": 1.0, "delta": 0.1, "multistart_count": 0},
            {"L": 1.0, "delta": 0.1, "budget_inflation": 1.0},
            {"L": 1.0, "delta": -0.1},
            {"L": 1.0, "delta": 0.1, "anchor_fallback": "yes"},
        ],
    )
    def test_invalid(self, data):
        """Invalid values raise ConfigError."""
        with pytest.raises(ConfigError):
            DfoConfig.from_dict(data)
