"""
Truncation-error bounds on the simplex gradient.

Every bound takes a poised SampleSet and the gradient Lipschitz constant L
and is evaluated at the set's current reference point; sweeps over the
vertices go through rebase().
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SimplexGradError
from .geometry import nearest_point_in_hull
from .sample_set import SampleSet, rebase

ORTHOGONALITY_RTOL = 1e-8


def _check_lipschitz(lipschitz: float) -> float:
    if not lipschitz >= 0 or not math.isfinite(lipschitz):
        raise SimplexGradError("Lipschitz constant must be finite and nonnegative", {"L": lipschitz})
    return float(lipschitz)


def delta_bound(sample_set: SampleSet, lipschitz: float) -> float:
    """T_d = ||U_hat^-1|| sqrt(n_u) (L/2) Delta."""
    L = _check_lipschitz(lipschitz)
    return sample_set.scaled_inv_norm * math.sqrt(sample_set.n_u) * 0.5 * L * sample_set.delta


def delta_bound_uniform(sample_set: SampleSet, lipschitz: float) -> float:
    """T_d + L Delta, valid everywhere in the ball B(u_0, Delta)."""
    return delta_bound(sample_set, lipschitz) + lipschitz * sample_set.delta


def delta_bound_pointwise(sample_set: SampleSet, lipschitz: float, point) -> float:
    """T_d + L ||u - u_0||."""
    distance = np.linalg.norm(np.asarray(point, dtype=float) - sample_set.reference)
    return delta_bound(sample_set, lipschitz) + lipschitz * float(distance)


def has_orthogonal_columns(sample_set: SampleSet) -> bool:
    """Whether U^T U is diagonal up to 1e-8 relative off-diagonal mass."""
    gram = sample_set.displacement.T @ sample_set.displacement
    diagonal = np.diag(np.diag(gram))
    return bool(np.linalg.norm(gram - diagonal) <= ORTHOGONALITY_RTOL * np.linalg.norm(diagonal))


def radial_bound(sample_set: SampleSet, lipschitz: float) -> float:
    """
    T_r = L r, with r the circumradius of the set.

    A certified bound on ||epsilon_t(u_0)|| only when the columns of U are
    orthogonal (see has_orthogonal_columns); otherwise approximate, though
    it still bounds the projections of epsilon_t onto every column.
    """
    return _check_lipschitz(lipschitz) * sample_set.circumsphere.radius


def radial_bound_pointwise(sample_set: SampleSet, lipschitz: float, point) -> float:
    """T_f(u) = T_r + L ||u - u_0||, the pointwise approximate bound."""
    distance = np.linalg.norm(np.asarray(point, dtype=float) - sample_set.reference)
    return radial_bound(sample_set, lipschitz) + lipschitz * float(distance)


def square_column_bound(sample_set: SampleSet, lipschitz: float) -> float:
    """T_c = (L/2) ||[||u_j - u_0||^2]_j|| ||U^-1||; never exceeds T_d."""
    L = _check_lipschitz(lipschitz)
    return 0.5 * L * float(np.linalg.norm(sample_set.squared_column_norms)) * sample_set.inv_norm


def min_vertex_bounds(sample_set: SampleSet, lipschitz: float) -> tuple[float, float]:
    """(T_rv, T_cv): the smallest radial and square-column bounds over all references."""
    radial = []
    column = []
    for ref in range(sample_set.n_u + 1):
        rebased = rebase(sample_set, ref)
        radial.append(radial_bound(rebased, lipschitz))
        column.append(square_column_bound(rebased, lipschitz))
    return min(radial), min(column)


def extended_radial_bound(sample_set: SampleSet, lipschitz: float, point) -> float:
    """
    T_h(u) = L ||u_c - u||.

    Gradient error of the worst-curvature quadratic interpolant; equals
    T_r at every vertex and vanishes at the circumcenter. Approximate only.
    """
    center = sample_set.circumsphere.center
    return _check_lipschitz(lipschitz) * float(np.linalg.norm(center - np.asarray(point, dtype=float)))


def simplex_bound(sample_set: SampleSet, lipschitz: float) -> tuple[float, np.ndarray]:
    """
    T_s = min of T_h over conv(points), with the minimizing point u_s*.

    Zero exactly when the circumcenter lies inside the hull.
    """
    L = _check_lipschitz(lipschitz)
    center = sample_set.circumsphere.center
    witness, _ = nearest_point_in_hull(center, sample_set.points)
    return L * float(np.linalg.norm(center - witness)), witness


@dataclass
class TruncationReport:
    """Truncation bounds for one sample set and Lipschitz constant."""

    t_delta: float
    t_column: float
    t_radial: float
    t_min_vertex_radial: float
    t_min_vertex_column: float
    t_simplex: float
    lipschitz: float
    orthogonal_columns: bool

    def to_dict(self) -> dict:
        return {
            "T_d": self.t_delta,
            "T_c": self.t_column,
            "T_r": self.t_radial,
            "T_rv": self.t_min_vertex_radial,
            "T_cv": self.t_min_vertex_column,
            "T_s": self.t_simplex,
            "L": self.lipschitz,
            "orthogonal_columns": self.orthogonal_columns,
        }


def truncation_report(sample_set: SampleSet, lipschitz: float) -> TruncationReport:
    """All truncation bounds at the set's reference."""
    t_rv, t_cv = min_vertex_bounds(sample_set, lipschitz)
    t_s, _ = simplex_bound(sample_set, lipschitz)
    return TruncationReport(
        t_delta=delta_bound(sample_set, lipschitz),
        t_column=square_column_bound(sample_set, lipschitz),
        t_radial=radial_bound(sample_set, lipschitz),
        t_min_vertex_radial=t_rv,
        t_min_vertex_column=t_cv,
        t_simplex=t_s,
        lipschitz=float(lipschitz),
        orthogonal_columns=has_orthogonal_columns(sample_set),
    )
