"""
Affine and convex geometry shared by the gradient-error bounds.

Hyperplanes through anchor points, complement affine subspaces of a
sample set and the distances between them, circumscribed spheres, and
the Euclidean projection onto a simplicial convex hull.

All functions are pure; points are passed as array-likes of shape
(count, n_u) and returned as numpy arrays.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sp_linalg

from .errors import DegenerateDirectionsError, DimensionMismatchError, UnpoisedSetError

_log = logging.getLogger(__name__)

# Relative singular-value cutoffs.
POISED_RTOL = 1e-12
RANK_RTOL = 1e-10


def as_points(points) -> np.ndarray:
    """Coerce a point collection into a float array of shape (count, n_u)."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DimensionMismatchError(
            "Expected a nonempty list of points", {"shape": arr.shape}
        )
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatchError("Points must be finite")
    return arr


def displacement_matrix(points, ref_index: int = 0) -> np.ndarray:
    """Matrix whose columns are u_j - u_ref for j != ref, in point order."""
    pts = as_points(points)
    others = [j for j in range(pts.shape[0]) if j != ref_index]
    return (pts[others] - pts[ref_index]).T


def check_poised(displacement: np.ndarray) -> np.ndarray:
    """
    Verify a square displacement matrix is nonsingular.

    Returns its singular values (descending); raises UnpoisedSetError
    when sigma_min <= 1e-12 * sigma_max.
    """
    rows, cols = displacement.shape
    if rows != cols:
        raise DimensionMismatchError(
            "Linear interpolation needs exactly n_u + 1 points in R^n_u",
            {"points": cols + 1, "dimension": rows},
        )
    sigma = sp_linalg.svdvals(displacement)
    if sigma[0] == 0.0 or sigma[-1] <= POISED_RTOL * sigma[0]:
        raise UnpoisedSetError("Sample set is not poised for linear interpolation", sigma)
    return sigma


def orthogonal_complement(rows: np.ndarray, dimension: int) -> np.ndarray:
    """
    Orthonormal basis (as columns) of the complement of span(rows).

    Singular directions below 1e-10 * sigma_max count as part of the
    complement.
    """
    if rows.size == 0:
        return np.eye(dimension)
    _, sigma, vt = np.linalg.svd(rows, full_matrices=True)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.eye(dimension)
    rank = int(np.sum(sigma > RANK_RTOL * sigma[0]))
    return vt[rank:].T


def _canonical_sign(vector: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(vector))
    for component in vector:
        if abs(component) > 1e-12 * scale:
            return vector if component > 0 else -vector
    return vector


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """The set {u : normal . u = offset} with a unit normal."""

    normal: np.ndarray
    offset: float

    def signed_distance(self, point) -> float:
        """normal . u - offset (positive on the + side)."""
        return float(np.dot(self.normal, np.asarray(point, dtype=float)) - self.offset)

    def side(self, point) -> int:
        """+1, -1, or 0 when the point is on the hyperplane."""
        return int(np.sign(self.signed_distance(point)))

    def to_dict(self) -> dict:
        return {"normal": self.normal.tolist(), "offset": self.offset}


def hyperplane_through(points) -> Hyperplane:
    """
    The unique hyperplane through n_u points in R^n_u.

    The normal's first nonzero component is positive.
    """
    pts = as_points(points)
    count, dim = pts.shape
    if count != dim:
        raise DimensionMismatchError(
            "A hyperplane in R^n_u needs exactly n_u points",
            {"points": count, "dimension": dim},
        )
    directions = pts[1:] - pts[0]
    complement = orthogonal_complement(directions, dim)
    if complement.shape[1] != 1:
        raise DegenerateDirectionsError(
            "Anchor directions are linearly dependent",
            {"rank": dim - complement.shape[1], "required": dim - 1},
        )
    normal = _canonical_sign(complement[:, 0])
    normal = normal / np.linalg.norm(normal)
    return Hyperplane(normal=normal, offset=float(normal @ pts[0]))


@dataclass(frozen=True)
class ComplementPartition:
    """A bipartition of sample-point indices; index 0 is always in subset_a."""

    subset_a: tuple[int, ...]
    subset_c: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.subset_a or not self.subset_c:
            raise DimensionMismatchError("Both partition subsets must be nonempty")
        if set(self.subset_a) & set(self.subset_c):
            raise DimensionMismatchError("Partition subsets must be disjoint")

    @property
    def size_a(self) -> int:
        return len(self.subset_a)

    def to_dict(self) -> dict:
        return {"subset_a": list(self.subset_a), "subset_c": list(self.subset_c)}


@lru_cache(maxsize=32)
def _partitions(n_points: int) -> tuple[ComplementPartition, ...]:
    everything = range(n_points)
    result = []
    for size_a in range(1, n_points):
        for extra in itertools.combinations(range(1, n_points), size_a - 1):
            subset_a = (0, *extra)
            subset_c = tuple(i for i in everything if i not in subset_a)
            result.append(ComplementPartition(subset_a, subset_c))
    return tuple(result)


def enumerate_complement_partitions(n_points: int) -> list[ComplementPartition]:
    """
    All 2^(n_points-1) - 1 unordered bipartitions of the sample points.

    Ordered canonically: by size of subset_a, then lexicographically.
    """
    if n_points < 2:
        raise DimensionMismatchError("Need at least two points", {"n_points": n_points})
    return list(_partitions(n_points))


@lru_cache(maxsize=64)
def _membership(n_points: int, ref_index: int) -> np.ndarray:
    # Row p flags the U^-1 rows of whichever subset of partition p omits
    # the reference point.
    parts = _partitions(n_points)
    others = [j for j in range(n_points) if j != ref_index]
    column = {j: k for k, j in enumerate(others)}
    matrix = np.zeros((len(parts), n_points - 1))
    for row, part in enumerate(parts):
        far = part.subset_a if ref_index in part.subset_c else part.subset_c
        matrix[row, [column[j] for j in far]] = 1.0
    matrix.setflags(write=False)
    return matrix


def _poised_points(points) -> tuple[np.ndarray, np.ndarray]:
    pts = as_points(points)
    displacement = displacement_matrix(pts, 0)
    check_poised(displacement)
    return pts, displacement


def partition_distance(points, partition: ComplementPartition) -> float:
    """
    Distance l_AC between the complement affine subspaces of a partition.

    The normal is the orthogonal complement of the combined in-subset
    direction matrix Q; when that complement is multidimensional the
    distance is the norm of the projection of u^c - u^a onto it.
    """
    pts, _ = _poised_points(points)
    a, c = list(partition.subset_a), list(partition.subset_c)
    if max(a + c) >= pts.shape[0]:
        raise DimensionMismatchError("Partition index out of range")
    q = np.vstack([pts[a[1:]] - pts[a[0]], pts[c[1:]] - pts[c[0]]])
    complement = orthogonal_complement(q, pts.shape[1])
    gap = pts[c[0]] - pts[a[0]]
    return float(np.linalg.norm(complement.T @ gap))


def distances_from_inverse(inverse: np.ndarray, ref_index: int = 0) -> np.ndarray:
    """
    Partition distances in canonical order, given U^-1 for some reference.

    For a partition whose subset C omits the reference,
    l_AC = 1 / ||sum_{j in C} row_j(U^-1)||: the sum is the gradient of the
    linear function equal to 0 on A and 1 on C.
    """
    slopes = _membership(inverse.shape[0] + 1, ref_index) @ inverse
    return 1.0 / np.linalg.norm(slopes, axis=1)


def partition_distances(points) -> np.ndarray:
    """Distances for every canonical partition, in enumeration order."""
    _, displacement = _poised_points(points)
    inverse = sp_linalg.lu_solve(sp_linalg.lu_factor(displacement), np.eye(displacement.shape[0]))
    return distances_from_inverse(inverse, 0)


def argmin_partition(distances: np.ndarray) -> tuple[float, ComplementPartition]:
    """Smallest distance and its partition; ties go to the canonical order."""
    best = int(np.argmin(distances))
    return float(distances[best]), _partitions(_n_points(distances.shape[0]))[best]


def _n_points(n_partitions: int) -> int:
    # n_b = 2^(n_points - 1) - 1
    return (n_partitions + 1).bit_length()


def min_partition_distance(points) -> tuple[float, ComplementPartition]:
    """Shortest distance between complement affine subspaces, with its partition."""
    return argmin_partition(partition_distances(points))


@dataclass(frozen=True, eq=False)
class Circumsphere:
    """Sphere through every sample point."""

    center: np.ndarray
    radius: float

    def to_dict(self) -> dict:
        return {"center": self.center.tolist(), "radius": self.radius}


def circumsphere_from(reference: np.ndarray, displacement: np.ndarray, lu) -> Circumsphere:
    """
    Circumsphere from a reference point and the LU factors of its U.

    Solves 2 w^T U = [||u_j - u_0||^2]_j for w = u_c - u_0, which is
    2 u_c^T U = [||u_j||^2 - ||u_0||^2]_j shifted to the reference point.
    """
    squared = np.sum(displacement**2, axis=0)
    offset = sp_linalg.lu_solve(lu, 0.5 * squared, trans=1)
    return Circumsphere(center=reference + offset, radius=float(np.linalg.norm(offset)))


def circumsphere(points) -> Circumsphere:
    """Circumscribed sphere of n_u + 1 poised points."""
    pts, displacement = _poised_points(points)
    return circumsphere_from(pts[0], displacement, sp_linalg.lu_factor(displacement))


def _affine_projection(target: np.ndarray, subset: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    base = subset[0]
    if subset.shape[0] == 1:
        return base.copy(), np.ones(1)
    directions = (subset[1:] - base).T
    coeffs = np.linalg.lstsq(directions, target - base, rcond=None)[0]
    weights = np.concatenate(([1.0 - coeffs.sum()], coeffs))
    if np.any(weights < -1e-12):
        return None
    return base + directions @ coeffs, weights


def _is_projection(target: np.ndarray, point: np.ndarray, vertices: np.ndarray) -> bool:
    residual = target - point
    spread = vertices - point
    scale = 1.0 + np.linalg.norm(residual) * np.max(np.linalg.norm(spread, axis=1))
    return bool(np.max(spread @ residual) <= 1e-10 * scale)


def nearest_point_in_hull(target, vertices) -> tuple[np.ndarray, np.ndarray]:
    """
    Euclidean projection of target onto conv(vertices).

    Active-set enumeration: each vertex subset (largest first) is solved as
    an equality-constrained projection onto its affine hull; a candidate
    with nonnegative weights that satisfies the variational inequality
    (target - p) . (v_i - p) <= 0 for all vertices is the projection.

    Returns (point, weights) with weights >= 0 summing to one.
    """
    verts = as_points(vertices)
    x = np.asarray(target, dtype=float).reshape(-1)
    if x.shape[0] != verts.shape[1]:
        raise DimensionMismatchError(
            "Target and vertices differ in dimension",
            {"target": x.shape[0], "vertices": verts.shape[1]},
        )
    count = verts.shape[0]
    best: tuple[np.ndarray, np.ndarray, float] | None = None
    for size in range(count, 0, -1):
        for subset in itertools.combinations(range(count), size):
            candidate = _affine_projection(x, verts[list(subset)])
            if candidate is None:
                continue
            point, sub_weights = candidate
            weights = np.zeros(count)
            weights[list(subset)] = sub_weights
            if size == count == verts.shape[1] + 1:
                # Full-dimensional simplex containing the target.
                return x.copy(), _clean_weights(weights)
            if _is_projection(x, point, verts):
                return point, _clean_weights(weights)
            distance = float(np.linalg.norm(x - point))
            if best is None or distance < best[2]:
                best = (point, weights, distance)
    # Only reached under round-off; the closest admissible candidate wins.
    _log.debug("Hull projection fell back to closest candidate")
    assert best is not None
    return best[0], _clean_weights(best[1])


def _clean_weights(weights: np.ndarray) -> np.ndarray:
    weights = np.clip(weights, 0.0, None)
    return weights / weights.sum()
