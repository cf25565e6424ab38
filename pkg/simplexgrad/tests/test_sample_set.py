"""Tests for sample sets and input scaling."""

import numpy as np
import pytest

from simplexgrad import (
    DegenerateRangeError,
    DimensionMismatchError,
    NonpositiveStepError,
    ScalingSpec,
    UnpoisedSetError,
    build_sample_set,
    ffd_set,
    rebase,
    scale_point,
    unscale_point,
)


class TestBuildSampleSet:
    """Tests for build_sample_set."""

    def test_cached_quantities(self):
        """Displacement, radius and inverse norms are computed on construction."""
        s = build_sample_set([[0.0, 0.0], [2.0, 0.0], [0.0, 0.5]])
        assert s.n_u == 2
        assert s.displacement == pytest.approx(np.array([[2.0, 0.0], [0.0, 0.5]]))
        assert s.delta == pytest.approx(2.0)
        assert s.inv_norm == pytest.approx(2.0)
        assert s.scaled_inv_norm == pytest.approx(4.0)
        assert s.condition_number == pytest.approx(4.0)

    def test_reference_index(self):
        """The displacement is taken from the designated reference."""
        s = build_sample_set([[0.0, 0.0], [2.0, 0.0], [0.0, 0.5]], ref_index=1)
        assert s.reference == pytest.approx([2.0, 0.0])
        assert s.other_indices == [0, 2]
        assert s.displacement[:, 0] == pytest.approx([-2.0, 0.0])

    def test_collinear(self):
        """Collinear points are not poised and report singular values."""
        with pytest.raises(UnpoisedSetError) as info:
            build_sample_set([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        assert len(info.value.singular_values) == 2

    def test_wrong_count(self):
        """n_u + 1 points are required."""
        with pytest.raises(DimensionMismatchError):
            build_sample_set([[0.0, 0.0], [1.0, 0.0]])

    def test_reference_out_of_range(self):
        """The reference must index a point."""
        with pytest.raises(DimensionMismatchError):
            build_sample_set([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], ref_index=3)

    def test_immutable(self):
        """Stored points cannot be modified in place."""
        s = build_sample_set([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            s.points[0, 0] = 5.0

    def test_inverse(self):
        """inverse() returns a writable copy of U^-1."""
        s = build_sample_set([[0.0, 0.0], [2.0, 0.0], [0.0, 0.5]])
        inverse = s.inverse()
        assert inverse @ s.displacement == pytest.approx(np.eye(2))
        inverse[0, 0] = 0.0
        assert s.inverse_matrix[0, 0] == pytest.approx(0.5)

    def test_differences(self):
        """Value differences follow the column order of U."""
        s = build_sample_set([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], ref_index=2)
        assert s.differences([1.0, 2.0, 4.0]) == pytest.approx([-3.0, -2.0])
        with pytest.raises(DimensionMismatchError):
            s.differences([1.0, 2.0])


class TestFfdSet:
    """Tests for ffd_set."""

    def test_layout(self):
        """Points are the origin and one step along each axis."""
        s = ffd_set([1.0, 2.0, 3.0], 0.1)
        assert s.ref_index == 0
        assert s.points[2] == pytest.approx([1.0, 2.1, 3.0])
        assert s.delta == pytest.approx(0.1)
        assert s.inv_norm == pytest.approx(10.0)
        assert s.scaled_inv_norm == pytest.approx(1.0)

    @pytest.mark.parametrize("h", [0.0, -0.1])
    def test_nonpositive_step(self, h):
        """The step must be positive."""
        with pytest.raises(NonpositiveStepError):
            ffd_set([0.0, 0.0], h)


class TestRebase:
    """Tests for rebase."""

    def test_same_points(self):
        """Rebasing keeps the points and changes the reference."""
        s = build_sample_set([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        moved = rebase(s, 2)
        assert moved.ref_index == 2
        assert moved.points == pytest.approx(s.points)
        assert rebase(s, 0) is s

    def test_reference_free_geometry(self):
        """Circumsphere and partition distances do not depend on the reference."""
        rng = np.random.default_rng(5)
        s = build_sample_set(rng.uniform(-1.0, 1.0, size=(4, 3)))
        for ref in (1, 2, 3):
            moved = rebase(s, ref)
            assert moved.circumsphere.center == pytest.approx(s.circumsphere.center)
            assert moved.circumsphere.radius == pytest.approx(s.circumsphere.radius)
            assert moved.partition_distances == pytest.approx(s.partition_distances)
            assert moved.min_partition[1] == s.min_partition[1]


    def test_round_trip(self):
        """Rebasing away and back restores every cached field."""
        rng = np.random.default_rng(6)
        s = build_sample_set(rng.uniform(-1.0, 1.0, size=(4, 3)))
        for ref in (1, 2, 3):
            back = rebase(rebase(s, ref), 0)
            assert back.ref_index == 0
            np.testing.assert_allclose(back.displacement, s.displacement)
            np.testing.assert_allclose(back.inverse_matrix, s.inverse_matrix, atol=1e-10)
            np.testing.assert_allclose(back.circumsphere.center, s.circumsphere.center, atol=1e-10)
            np.testing.assert_allclose(back.partition_distances, s.partition_distances, rtol=1e-9)
            assert back.inv_norm == pytest.approx(s.inv_norm)
            assert back.delta == pytest.approx(s.delta)


class TestSimilarity:
    """Tests for how cached quantities follow a similarity transform of the points."""

    def test_scaling_covariance(self):
        """Lengths scale by s, ||U^-1|| by 1/s, and ||U_hat^-1|| is unchanged."""
        rng = np.random.default_rng(9)
        for n_u in (1, 2, 4):
            points = rng.uniform(-1.0, 1.0, size=(n_u + 1, n_u))
            shift = rng.normal(size=n_u)
            s = build_sample_set(points)
            for factor in (0.01, 0.5, 7.0):
                t = build_sample_set(factor * points + shift)
                assert t.delta == pytest.approx(factor * s.delta)
                assert t.circumsphere.radius == pytest.approx(factor * s.circumsphere.radius)
                np.testing.assert_allclose(t.circumsphere.center, factor * s.circumsphere.center + shift, atol=1e-9)
                np.testing.assert_allclose(t.partition_distances, factor * s.partition_distances, rtol=1e-8)
                assert t.inv_norm == pytest.approx(s.inv_norm / factor)
                assert t.scaled_inv_norm == pytest.approx(s.scaled_inv_norm)

class TestScaling:
    """Tests for ScalingSpec, scale_point and unscale_point."""

    def test_scale(self):
        """Coordinates are mapped onto [0, 1]."""
        spec = ScalingSpec(lower=[0.0, -2.0], upper=[10.0, 2.0])
        assert scale_point(spec, [5.0, 2.0]) == pytest.approx([0.5, 1.0])
        assert unscale_point(spec, [0.5, 1.0]) == pytest.approx([5.0, 2.0])

    def test_degenerate_range(self):
        """upper == lower is rejected."""
        with pytest.raises(DegenerateRangeError):
            ScalingSpec(lower=[0.0, 1.0], upper=[1.0, 1.0])

    def test_shape_mismatch(self):
        """Points must match the scaling dimension."""
        spec = ScalingSpec(lower=[0.0, 0.0], upper=[1.0, 1.0])
        with pytest.raises(DimensionMismatchError):
            scale_point(spec, [0.5])
