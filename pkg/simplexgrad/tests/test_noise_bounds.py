"""Tests for measurement-noise bounds."""

import math

import numpy as np
import pytest

from simplexgrad import (
    DimensionTooLargeError,
    NoiseRealization,
    SimplexGradError,
    build_sample_set,
    conditioning_bound,
    ffd_set,
    lmin_bound,
    noise_error,
    noise_plane_angle,
    rebase,
    worst_case_noise_error,
)


class TestConditioningBound:
    """Tests for conditioning_bound."""

    def test_value(self):
        """N_c = 2 delta sqrt(n_u) ||U^-1||."""
        s = build_sample_set([[0.0, 0.0], [2.0, 0.0], [0.0, 0.5]])
        assert conditioning_bound(s, 0.1) == pytest.approx(2 * 0.1 * math.sqrt(2.0) * 2.0)

    def test_zero_noise(self):
        """No noise, no noise error."""
        assert conditioning_bound(ffd_set([0.0, 0.0], 0.1), 0.0) == 0.0

    def test_negative_delta(self):
        """delta must be nonnegative."""
        with pytest.raises(SimplexGradError):
            conditioning_bound(ffd_set([0.0, 0.0], 0.1), -0.1)


class TestLminBound:
    """Tests for lmin_bound."""

    def test_ffd_coincidence(self):
        """On FFD sets N_l equals N_c."""
        rng = np.random.default_rng(31)
        for n_u in range(1, 11):
            s = ffd_set(rng.uniform(-1.0, 1.0, n_u), rng.uniform(0.01, 1.0))
            report = lmin_bound(s, 0.05)
            assert abs(report.n_lmin - report.n_conditioning) <= 1e-10

    def test_report(self):
        """The report carries l_min and its partition."""
        s = build_sample_set([[0.0, 0.0], [4.0, 0.0], [0.0, 1.0]])
        report = lmin_bound(s, 0.2)
        assert report.l_min == pytest.approx(4.0 / math.sqrt(17.0))
        assert report.n_lmin == pytest.approx(0.4 / report.l_min)
        assert report.to_dict()["argmin_partition"] == {"subset_a": [0], "subset_c": [1, 2]}

    def test_never_exceeds_conditioning(self):
        """N_l <= N_c on random sets."""
        rng = np.random.default_rng(32)
        for trial in range(100):
            n_u = 1 + trial % 5
            s = build_sample_set(rng.uniform(-1.0, 1.0, size=(n_u + 1, n_u)))
            report = lmin_bound(s, 0.1)
            assert report.n_lmin <= report.n_conditioning * (1 + 1e-12)


    def test_scale_inverse(self):
        """Scaling the points by s divides N_c and N_l by s."""
        rng = np.random.default_rng(34)
        for n_u in (1, 2, 3):
            points = rng.uniform(-1.0, 1.0, size=(n_u + 1, n_u))
            s = build_sample_set(points)
            for factor in (0.1, 3.0):
                t = build_sample_set(factor * points)
                assert conditioning_bound(t, 0.2) == pytest.approx(conditioning_bound(s, 0.2) / factor)
                assert lmin_bound(t, 0.2).n_lmin == pytest.approx(lmin_bound(s, 0.2).n_lmin / factor)

    def test_soundness_over_realizations(self):
        """No bounded noise realization exceeds N_l, over ten thousand draws."""
        rng = np.random.default_rng(35)
        delta = 0.1
        for trial in range(100):
            n_u = 1 + trial % 4
            s = build_sample_set(rng.uniform(-1.0, 1.0, size=(n_u + 1, n_u)))
            bound = lmin_bound(s, delta).n_lmin
            for values in rng.uniform(-delta, delta, size=(100, n_u + 1)):
                assert np.linalg.norm(noise_error(s, values)) <= bound * (1 + 1e-9)

class TestWorstCase:
    """Tests for worst_case_noise_error."""

    def test_equals_lmin_bound(self):
        """The brute-force maximum equals 2 delta / l_min."""
        rng = np.random.default_rng(33)
        for trial in range(500):
            n_u = 1 + trial % 5
            s = build_sample_set(rng.uniform(-1.0, 1.0, size=(n_u + 1, n_u)))
            top, _ = worst_case_noise_error(s, 0.3)
            expected = lmin_bound(s, 0.3).n_lmin
            assert abs(top - expected) <= 1e-8 * expected

    def test_pattern(self):
        """The maximizing realization sits on the +-delta vertices and attains the maximum."""
        s = build_sample_set([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        top, pattern = worst_case_noise_error(s, 0.5)
        assert np.abs(pattern.values) == pytest.approx(np.full(3, 0.5))
        assert np.linalg.norm(noise_error(s, pattern)) == pytest.approx(top)
        # First lexicographic maximizer: (-, +, +).
        assert pattern.signs == (-1, 1, 1)

    def test_reference_free(self):
        """The worst case is the same from every reference."""
        s = build_sample_set([[0.0, 0.0], [3.0, 1.0], [1.0, 2.0]])
        values = [worst_case_noise_error(rebase(s, r), 0.1)[0] for r in range(3)]
        assert values == pytest.approx([values[0]] * 3)

    def test_dimension_cap(self):
        """Enumeration beyond twelve dimensions is refused."""
        with pytest.raises(DimensionTooLargeError):
            worst_case_noise_error(ffd_set(np.zeros(13), 1.0), 0.1)


class TestNoiseRealization:
    """Tests for NoiseRealization and noise_error."""

    def test_exceeds_bound(self):
        """Values beyond delta are rejected."""
        with pytest.raises(SimplexGradError):
            NoiseRealization(values=[0.1, -0.3], delta=0.2)

    def test_noise_error(self):
        """epsilon_n = U^-T [v_j - v_0]_j."""
        s = ffd_set([0.0, 0.0], 0.5)
        realization = NoiseRealization(values=[0.1, -0.1, 0.1], delta=0.1)
        assert noise_error(s, realization) == pytest.approx([-0.4, 0.0])

    def test_constant_noise_cancels(self):
        """Equal noise at every point leaves the gradient unchanged."""
        s = build_sample_set([[0.0, 0.0], [1.0, 0.3], [0.2, 1.0]])
        assert noise_error(s, [0.2, 0.2, 0.2]) == pytest.approx([0.0, 0.0])


class TestNoisePlaneAngle:
    """Tests for noise_plane_angle."""

    def test_values(self):
        """alpha = acos(1 / sqrt(||eps_n||^2 + 1))."""
        assert noise_plane_angle([0.0, 0.0]) == 0.0
        assert noise_plane_angle([1.0, 0.0]) == pytest.approx(math.pi / 4)
        eps = np.array([0.3, -1.2])
        expected = math.acos(1.0 / math.sqrt(eps @ eps + 1.0))
        assert noise_plane_angle(eps) == pytest.approx(expected)
