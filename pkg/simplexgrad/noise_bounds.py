"""
Measurement-noise bounds on the simplex gradient.

With noisy values f(u_j) + v_j, |v_j| <= delta, the noise part of the
gradient error is epsilon_n = U^-T [v_j - v_0]_j. Its worst case over all
admissible noise is exactly 2 delta / l_min, where l_min is the shortest
distance between complement affine subspaces of the sample set.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionTooLargeError, SimplexGradError
from .geometry import ComplementPartition
from .sample_set import SampleSet

_log = logging.getLogger(__name__)

MAX_ENUMERATION_DIM = 12


def _check_delta(delta: float) -> float:
    if not delta >= 0 or not math.isfinite(delta):
        raise SimplexGradError("Noise bound delta must be finite and nonnegative", {"delta": delta})
    return float(delta)


@dataclass(eq=False)
class NoiseRealization:
    """Noise values v_j at the sample points, bounded by delta."""

    values: np.ndarray
    delta: float

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if np.any(np.abs(self.values) > self.delta * (1 + 1e-12)):
            raise SimplexGradError(
                "Noise realization exceeds its bound",
                {"max_abs": float(np.max(np.abs(self.values))), "delta": self.delta},
            )

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(int(s) for s in np.sign(self.values))


@dataclass
class NoiseReport:
    """Noise bounds for one sample set and noise level."""

    n_conditioning: float
    n_lmin: float
    l_min: float
    argmin_partition: ComplementPartition
    delta_noise: float

    def to_dict(self) -> dict:
        return {
            "N_c": self.n_conditioning,
            "N_l": self.n_lmin,
            "l_min": self.l_min,
            "argmin_partition": self.argmin_partition.to_dict(),
            "delta": self.delta_noise,
        }


def conditioning_bound(sample_set: SampleSet, delta: float) -> float:
    """N_c = 2 delta sqrt(n_u) ||U^-1||."""
    return 2.0 * _check_delta(delta) * math.sqrt(sample_set.n_u) * sample_set.inv_norm


def lmin_bound(sample_set: SampleSet, delta: float) -> NoiseReport:
    """N_l = 2 delta / l_min, the least upper bound on ||epsilon_n||."""
    d = _check_delta(delta)
    l_min, partition = sample_set.min_partition
    return NoiseReport(
        n_conditioning=conditioning_bound(sample_set, d),
        n_lmin=2.0 * d / l_min,
        l_min=l_min,
        argmin_partition=partition,
        delta_noise=d,
    )


def noise_error(sample_set: SampleSet, noise) -> np.ndarray:
    """epsilon_n = U^-T [v_j - v_ref]_j for a given noise realization."""
    values = noise.values if isinstance(noise, NoiseRealization) else noise
    return sample_set.solve_transposed(sample_set.differences(values))


@lru_cache(maxsize=16)
def _sign_patterns(n_points: int) -> np.ndarray:
    # Lexicographic with -1 before +1.
    patterns = np.array(list(itertools.product((-1.0, 1.0), repeat=n_points)))
    patterns.setflags(write=False)
    return patterns


def worst_case_noise_error(sample_set: SampleSet, delta: float) -> tuple[float, NoiseRealization]:
    """
    Exhaustive maximum of ||epsilon_n|| over the 2^(n_u+1) patterns v_j = +-delta.

    The maximum of a convex function over the noise box is attained at a
    vertex, so this is exact; it equals 2 delta / l_min. Ties go to the
    lexicographically first pattern.
    """
    d = _check_delta(delta)
    if sample_set.n_u > MAX_ENUMERATION_DIM:
        raise DimensionTooLargeError(
            "Sign-pattern enumeration is capped", {"n_u": sample_set.n_u, "cap": MAX_ENUMERATION_DIM}
        )
    patterns = _sign_patterns(sample_set.n_u + 1)
    columns = patterns[:, sample_set.other_indices] - patterns[:, [sample_set.ref_index]]
    errors = d * columns @ sample_set.inverse_matrix
    norms = np.linalg.norm(errors, axis=1)
    top = float(norms.max())
    best = int(np.flatnonzero(norms >= top * (1 - 1e-12))[0])
    _log.debug("Worst-case noise pattern %s, ||eps_n|| = %.6g", patterns[best], top)
    return top, NoiseRealization(values=d * patterns[best], delta=d)


def noise_plane_angle(epsilon_n) -> float:
    """
    Angle alpha = acos(1 / sqrt(||eps_n||^2 + 1)) in [0, pi/2).

    Computed as atan(||eps_n||), the same angle.
    """
    return math.atan(float(np.linalg.norm(np.asarray(epsilon_n, dtype=float))))
