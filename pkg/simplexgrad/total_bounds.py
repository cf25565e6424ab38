"""
Total (truncation + noise) gradient-error bounds.

Includes the square-column/l-min total bound E_c, the forward
finite-difference bound E_FFD with its optimal step, the aggregate
BoundReport, and the candidate-parameterised bounds E_r(u), E_s(u) that
serve as duality constraints: n_u anchor points are fixed and the bound
is evaluated for the set {u, anchors...} as a function of u.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DegenerateCandidateError,
    DimensionMismatchError,
    NonpositiveStepError,
    UnpoisedSetError,
    ZeroLipschitzError,
)
from .geometry import Hyperplane, as_points, hyperplane_through
from .noise_bounds import conditioning_bound, lmin_bound
from .sample_set import SampleSet, build_sample_set
from .truncation_bounds import (
    delta_bound,
    delta_bound_uniform,
    has_orthogonal_columns,
    min_vertex_bounds,
    radial_bound,
    simplex_bound,
    square_column_bound,
)

_log = logging.getLogger(__name__)

HYPERPLANE_RTOL = 1e-9


class BoundKind(str, Enum):
    """Truncation part of a candidate bound."""

    RADIAL = "radial"
    SIMPLEX = "simplex"


def total_bound_ec(sample_set: SampleSet, lipschitz: float, delta: float) -> float:
    """E_c = T_c + 2 delta / l_min."""
    return square_column_bound(sample_set, lipschitz) + lmin_bound(sample_set, delta).n_lmin


def ffd_error_bound(n_u: int, lipschitz: float, delta: float, h: float) -> float:
    """E_FFD = L sqrt(n_u) h / 2 + 2 delta sqrt(n_u) / h."""
    if not h > 0:
        raise NonpositiveStepError("Finite-difference step must be positive", {"h": h})
    root = math.sqrt(n_u)
    return lipschitz * root * h / 2.0 + 2.0 * delta * root / h


def optimal_ffd_step(lipschitz: float, delta: float) -> float:
    """h* = 2 sqrt(delta / L), the unique minimizer of E_FFD."""
    if not lipschitz > 0:
        raise ZeroLipschitzError("Optimal step needs a positive Lipschitz constant", {"L": lipschitz})
    if not delta > 0:
        raise NonpositiveStepError("Noise-free optimal step degenerates to zero", {"delta": delta})
    return 2.0 * math.sqrt(delta / lipschitz)


def ffd_min_error_bound(n_u: int, lipschitz: float, delta: float) -> float:
    """E*_FFD = E_FFD(h*) = 2 sqrt(n_u L delta)."""
    return ffd_error_bound(n_u, lipschitz, delta, optimal_ffd_step(lipschitz, delta))


@dataclass
class BoundReport:
    """Every bound for one sample set and constants (L, delta)."""

    t_delta: float
    t_delta_uniform: float
    t_column: float
    t_radial: float
    t_min_vertex_radial: float
    t_min_vertex_column: float
    t_simplex: float
    n_conditioning: float
    n_lmin: float
    e_column: float
    l_min: float
    radius: float
    delta_radius: float
    inv_norm: float
    scaled_inv_norm: float
    orthogonal_columns: bool
    lipschitz: float
    delta_noise: float
    ref_index: int
    circumcenter: list[float] = field(default_factory=list)
    simplex_witness: list[float] = field(default_factory=list)
    argmin_partition: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ref_index": self.ref_index,
            "L": self.lipschitz,
            "delta": self.delta_noise,
            "T_d": self.t_delta,
            "T_d_uniform": self.t_delta_uniform,
            "T_c": self.t_column,
            "T_r": self.t_radial,
            "T_rv": self.t_min_vertex_radial,
            "T_cv": self.t_min_vertex_column,
            "T_s": self.t_simplex,
            "N_c": self.n_conditioning,
            "N_l": self.n_lmin,
            "E_c": self.e_column,
            "l_min": self.l_min,
            "r": self.radius,
            "Delta": self.delta_radius,
            "inv_norm": self.inv_norm,
            "scaled_inv_norm": self.scaled_inv_norm,
            "orthogonal_columns": self.orthogonal_columns,
            "circumcenter": self.circumcenter,
            "simplex_witness": self.simplex_witness,
            "argmin_partition": self.argmin_partition,
        }


def bound_report(sample_set: SampleSet, lipschitz: float, delta: float) -> BoundReport:
    """Evaluate every truncation, noise and total bound at the set's reference."""
    sphere = sample_set.circumsphere
    noise = lmin_bound(sample_set, delta)
    t_rv, t_cv = min_vertex_bounds(sample_set, lipschitz)
    t_s, witness = simplex_bound(sample_set, lipschitz)
    t_c = square_column_bound(sample_set, lipschitz)
    return BoundReport(
        t_delta=delta_bound(sample_set, lipschitz),
        t_delta_uniform=delta_bound_uniform(sample_set, lipschitz),
        t_column=t_c,
        t_radial=radial_bound(sample_set, lipschitz),
        t_min_vertex_radial=t_rv,
        t_min_vertex_column=t_cv,
        t_simplex=t_s,
        n_conditioning=noise.n_conditioning,
        n_lmin=noise.n_lmin,
        e_column=t_c + noise.n_lmin,
        l_min=noise.l_min,
        radius=sphere.radius,
        delta_radius=sample_set.delta,
        inv_norm=sample_set.inv_norm,
        scaled_inv_norm=sample_set.scaled_inv_norm,
        orthogonal_columns=has_orthogonal_columns(sample_set),
        lipschitz=float(lipschitz),
        delta_noise=float(delta),
        ref_index=sample_set.ref_index,
        circumcenter=sphere.center.tolist(),
        simplex_witness=witness.tolist(),
        argmin_partition=noise.argmin_partition.to_dict(),
    )


@dataclass(eq=False)
class CandidateContext:
    """
    Fixed anchors of a duality constraint.

    The n_u anchors span the dividing hyperplane; a candidate u completes
    them to the sample set {u, anchors...}.
    """

    anchor_points: np.ndarray
    lipschitz: float
    delta_noise: float
    kind: BoundKind = BoundKind.RADIAL
    hyperplane: Hyperplane = field(init=False)
    scale: float = field(init=False)

    def __post_init__(self) -> None:
        self.anchor_points = as_points(self.anchor_points)
        self.kind = BoundKind(self.kind)
        self.hyperplane = hyperplane_through(self.anchor_points)
        spread = self.anchor_points - self.anchor_points[0]
        self.scale = 1.0 + float(np.max(np.linalg.norm(spread, axis=1)))

    @property
    def n_u(self) -> int:
        return self.anchor_points.shape[1]

    def augmented_set(self, point) -> SampleSet:
        """The sample set {u, anchors...} with u as reference."""
        u = np.asarray(point, dtype=float).reshape(-1)
        if u.shape[0] != self.n_u:
            raise DimensionMismatchError(
                "Candidate dimension differs from the anchors", {"candidate": u.shape[0], "n_u": self.n_u}
            )
        distance = self.hyperplane.signed_distance(u)
        if abs(distance) < HYPERPLANE_RTOL * self.scale:
            raise DegenerateCandidateError("Candidate lies on the anchor hyperplane", distance)
        try:
            return build_sample_set(np.vstack([u, self.anchor_points]), 0)
        except UnpoisedSetError as exc:
            raise DegenerateCandidateError("Candidate set is not poised", distance) from exc


def candidate_bound(ctx: CandidateContext, point) -> float:
    """
    E(u) = T(u) + N_l(u) for the set {u, anchors...}.

    T is the radial bound (E_r) or the simplex bound (E_s) depending on
    ctx.kind. Grows without bound as u approaches the anchor hyperplane;
    on it, DegenerateCandidateError carries the saturating sentinel.
    """
    sample_set = ctx.augmented_set(point)
    if ctx.kind is BoundKind.SIMPLEX:
        truncation, _ = simplex_bound(sample_set, ctx.lipschitz)
    else:
        truncation = radial_bound(sample_set, ctx.lipschitz)
    return truncation + lmin_bound(sample_set, ctx.delta_noise).n_lmin


def candidate_components(ctx: CandidateContext, point) -> dict[str, float]:
    """
    Every candidate-parameterised bound at u, for feasible-region maps.

    Keys: T_d, T_c, T_r, T_s, N_c, N_l, E_r, E_s.
    """
    sample_set = ctx.augmented_set(point)
    t_r = radial_bound(sample_set, ctx.lipschitz)
    t_s, _ = simplex_bound(sample_set, ctx.lipschitz)
    n_l = lmin_bound(sample_set, ctx.delta_noise).n_lmin
    return {
        "T_d": delta_bound(sample_set, ctx.lipschitz),
        "T_c": square_column_bound(sample_set, ctx.lipschitz),
        "T_r": t_r,
        "T_s": t_s,
        "N_c": conditioning_bound(sample_set, ctx.delta_noise),
        "N_l": n_l,
        "E_r": t_r + n_l,
        "E_s": t_s + n_l,
    }


# Apex heights along the anchor normal, as multiples of the reference height.
APEX_HEIGHT_FACTORS = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)


def anchor_circumcenter(ctx: CandidateContext) -> tuple[np.ndarray, float]:
    """
    Center and radius of the anchors' circumsphere within their affine hull.

    With V the rows a_i - a_0, the center is a_0 + V^T y where
    2 V V^T y = diag(V V^T). A single anchor is its own center.
    """
    anchors = ctx.anchor_points
    base = anchors[0]
    if anchors.shape[0] == 1:
        return base.copy(), 0.0
    spread = anchors[1:] - base
    gram = spread @ spread.T
    coeffs = np.linalg.lstsq(2.0 * gram, np.diag(gram), rcond=None)[0]
    offset = spread.T @ coeffs
    return base + offset, float(np.linalg.norm(offset))


def apex_points(ctx: CandidateContext, reference_height: float, factors=APEX_HEIGHT_FACTORS) -> np.ndarray:
    """Points c_a + t n on the + side of the anchor hyperplane, t = reference_height * factor."""
    if not reference_height > 0:
        raise NonpositiveStepError("Apex height must be positive", {"height": reference_height})
    center, _ = anchor_circumcenter(ctx)
    heights = reference_height * np.asarray(factors, dtype=float)
    return center + heights[:, None] * ctx.hyperplane.normal


def min_apex_bound(ctx: CandidateContext, reference_height: float) -> tuple[np.ndarray, float]:
    """
    Lowest candidate bound over the apex points, with its point.

    Reflection through the anchor hyperplane fixes the anchors, so the
    mirrored apex on the - side has the same value. At height equal to the
    anchor radius the augmented circumradius equals it, the least possible.
    """
    best_point, best_value = None, math.inf
    for point in apex_points(ctx, reference_height):
        try:
            value = candidate_bound(ctx, point)
        except DegenerateCandidateError:
            continue
        if value < best_value:
            best_point, best_value = point, value
    if best_point is None:
        raise DegenerateCandidateError("No apex point completes a poised set", 0.0)
    return best_point, best_value
