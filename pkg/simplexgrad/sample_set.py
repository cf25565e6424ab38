"""
Interpolation sample sets and input scaling.

A SampleSet holds n_u + 1 points in R^n_u with a designated reference
point u_0 and caches the displacement matrix U = [u_j - u_0]_{j != ref},
the radius Delta = max_j ||u_j - u_0||, and the spectral norms of U^-1
and of the scaled inverse (U / Delta)^-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sp_linalg

from .errors import DegenerateRangeError, DimensionMismatchError, NonpositiveStepError
from .geometry import (
    Circumsphere,
    ComplementPartition,
    argmin_partition,
    as_points,
    check_poised,
    circumsphere_from,
    displacement_matrix,
    distances_from_inverse,
)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """
    A poised set of n_u + 1 interpolation points.

    Immutable after construction. Norms and factors are computed in
    __post_init__; the inverse, circumsphere and partition distances on
    first use.
    """

    points: np.ndarray
    ref_index: int = 0
    displacement: np.ndarray = field(init=False, repr=False)
    singular_values: np.ndarray = field(init=False, repr=False)
    delta: float = field(init=False)
    inv_norm: float = field(init=False)
    scaled_inv_norm: float = field(init=False)
    _lu: tuple = field(init=False, repr=False)

    def __post_init__(self) -> None:
        pts = as_points(self.points).copy()
        count, dim = pts.shape
        if count != dim + 1:
            raise DimensionMismatchError(
                "Linear interpolation needs exactly n_u + 1 points",
                {"points": count, "dimension": dim},
            )
        if not 0 <= self.ref_index < count:
            raise DimensionMismatchError(
                "Reference index out of range", {"ref_index": self.ref_index, "points": count}
            )
        pts.setflags(write=False)
        displacement = displacement_matrix(pts, self.ref_index)
        sigma = check_poised(displacement)
        displacement.setflags(write=False)
        delta = float(np.max(np.linalg.norm(displacement, axis=0)))
        inv_norm = float(1.0 / sigma[-1])

        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "displacement", displacement)
        object.__setattr__(self, "singular_values", sigma)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "inv_norm", inv_norm)
        object.__setattr__(self, "scaled_inv_norm", delta * inv_norm)
        object.__setattr__(self, "_lu", sp_linalg.lu_factor(displacement))

    @property
    def n_u(self) -> int:
        """Dimension of the input space."""
        return self.points.shape[1]

    @property
    def reference(self) -> np.ndarray:
        """The reference point u_0."""
        return self.points[self.ref_index]

    @property
    def other_indices(self) -> list[int]:
        """Point indices in column order of U."""
        return [j for j in range(self.n_u + 1) if j != self.ref_index]

    @property
    def column_norms(self) -> np.ndarray:
        """||u_j - u_0|| for each column of U."""
        return np.linalg.norm(self.displacement, axis=0)

    @property
    def squared_column_norms(self) -> np.ndarray:
        """[||u_j - u_0||^2]_j, the row vector used by several bounds."""
        return np.sum(self.displacement**2, axis=0)

    @property
    def scaled_displacement(self) -> np.ndarray:
        """U / Delta."""
        return self.displacement / self.delta

    @property
    def condition_number(self) -> float:
        return float(self.singular_values[0] / self.singular_values[-1])

    def differences(self, values) -> np.ndarray:
        """y_j = value_j - value_ref in column order."""
        vals = np.asarray(values, dtype=float).reshape(-1)
        if vals.shape[0] != self.n_u + 1:
            raise DimensionMismatchError(
                "One value per sample point is required",
                {"values": vals.shape[0], "points": self.n_u + 1},
            )
        return vals[self.other_indices] - vals[self.ref_index]

    def solve_transposed(self, rhs) -> np.ndarray:
        """U^-T rhs, via the LU factorisation."""
        return sp_linalg.lu_solve(self._lu, np.asarray(rhs, dtype=float), trans=1)

    def inverse(self) -> np.ndarray:
        """Explicit U^-1 (rows indexed like the columns of U)."""
        return self.inverse_matrix.copy()

    @cached_property
    def inverse_matrix(self) -> np.ndarray:
        """U^-1, cached and read-only."""
        inverse = sp_linalg.lu_solve(self._lu, np.eye(self.n_u))
        inverse.setflags(write=False)
        return inverse

    @cached_property
    def circumsphere(self) -> Circumsphere:
        """Sphere through every point; the same for any reference."""
        return circumsphere_from(self.reference, self.displacement, self._lu)

    @cached_property
    def partition_distances(self) -> np.ndarray:
        """Distances between complement affine subspaces, canonical order."""
        return distances_from_inverse(self.inverse_matrix, self.ref_index)

    @property
    def min_partition(self) -> tuple[float, ComplementPartition]:
        """(l_min, argmin partition)."""
        return argmin_partition(self.partition_distances)

    def to_dict(self) -> dict:
        return {
            "ref_index": self.ref_index,
            "points": self.points.tolist(),
            "delta": self.delta,
            "inv_norm": self.inv_norm,
            "scaled_inv_norm": self.scaled_inv_norm,
        }


def build_sample_set(points, ref_index: int = 0) -> SampleSet:
    """Build and validate a sample set."""
    return SampleSet(points=as_points(points), ref_index=ref_index)


def ffd_set(origin, h: float) -> SampleSet:
    """
    Forward finite-difference arrangement {u_0, u_0 + h e_1, ..., u_0 + h e_n}.

    The origin is the reference.
    """
    if not h > 0:
        raise NonpositiveStepError("Finite-difference step must be positive", {"h": h})
    base = np.asarray(origin, dtype=float).reshape(-1)
    points = np.vstack([base, base + h * np.eye(base.shape[0])])
    return SampleSet(points=points, ref_index=0)


def rebase(sample_set: SampleSet, new_ref: int) -> SampleSet:
    """Same points with a different reference."""
    if new_ref == sample_set.ref_index:
        return sample_set
    return SampleSet(points=sample_set.points, ref_index=new_ref)


@dataclass(frozen=True, eq=False)
class ScalingSpec:
    """Per-coordinate box [lower, upper] mapped onto [0, 1]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape:
            raise DimensionMismatchError("Scaling bounds differ in shape")
        if np.any(upper <= lower):
            raise DegenerateRangeError(
                "Scaling needs upper > lower in every coordinate",
                {"coordinates": np.flatnonzero(upper <= lower).tolist()},
            )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower


def scale_point(spec: ScalingSpec, raw) -> np.ndarray:
    """(raw - lower) / (upper - lower), componentwise."""
    values = np.atleast_1d(np.asarray(raw, dtype=float))
    if values.shape != spec.lower.shape:
        raise DimensionMismatchError("Point and scaling bounds differ in shape")
    return (values - spec.lower) / spec.span


def unscale_point(spec: ScalingSpec, scaled) -> np.ndarray:
    """Inverse of scale_point."""
    values = np.atleast_1d(np.asarray(scaled, dtype=float))
    if values.shape != spec.lower.shape:
        raise DimensionMismatchError("Point and scaling bounds differ in shape")
    return spec.lower + values * spec.span
