"""
Half-space subproblems of the optimizer.

Each iteration minimizes the quadratic model m_k on one side of the anchor
hyperplane subject to the duality constraint E(u) <= E^U. E(u) is
nonsmooth and blows up at the hyperplane, so the solver is derivative
free: rejection-sampled seeds, then a compass search on the exact-penalty
function m_k(u) + rho * max(0, E(u) - E^U) from every feasible seed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DegenerateCandidateError, InfeasibleSubproblemError
from .gradient import QuadModel
from .total_bounds import CandidateContext, candidate_bound

_log = logging.getLogger(__name__)


class Side(str, Enum):
    """Side of the anchor hyperplane, by the sign of n^T u - b."""

    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> float:
        return 1.0 if self is Side.PLUS else -1.0


@dataclass
class SolverSettings:
    """Effort and tolerances of the multistart compass search."""

    multistart_count: int = 16
    sampling_rounds: int = 8
    penalty_base: float = 1e3
    initial_step_fraction: float = 0.25
    min_step: float = 1e-7
    max_local_evals: int = 400
    step_expansion: float = 2.0
    max_step_factor: float = 8.0
    line_fractions: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    seed: int = 0


@dataclass
class HalfSpaceSolution:
    """Best feasible point found on one side."""

    side: Side
    point: np.ndarray
    model_value: float
    bound_value: float
    feasible_seeds: int
    local_solutions: list[float] = field(default_factory=list)
    evaluations: int = 0

    def to_dict(self) -> dict:
        return {
            "side": self.side.value,
            "point": self.point.tolist(),
            "model_value": self.model_value,
            "bound_value": self.bound_value,
            "feasible_seeds": self.feasible_seeds,
            "local_solutions": self.local_solutions,
            "evaluations": self.evaluations,
        }


class _PenaltyFunction:
    """m_k + rho * constraint violation; +inf off-side or on the hyperplane."""

    def __init__(self, model: QuadModel, ctx: CandidateContext, budget: float, side: Side, rho: float):
        self.model = model
        self.ctx = ctx
        self.budget = budget
        self.side = side
        self.rho = rho
        self.evaluations = 0

    def bound(self, point: np.ndarray) -> float:
        """E(u), or inf when u is not strictly on this side."""
        self.evaluations += 1
        if self.side.sign * self.ctx.hyperplane.signed_distance(point) <= 0:
            return math.inf
        try:
            return candidate_bound(self.ctx, point)
        except DegenerateCandidateError:
            return math.inf

    def __call__(self, point: np.ndarray) -> tuple[float, float]:
        bound = self.bound(point)
        if not math.isfinite(bound):
            return math.inf, bound
        return self.model(point) + self.rho * max(0.0, bound - self.budget), bound


def _compass_search(
    penalty: _PenaltyFunction, start: np.ndarray, start_bound: float, step: float, settings: SolverSettings
) -> tuple[np.ndarray, float, float]:
    """
    Compass search from a feasible start; returns the best feasible point visited.

    The step grows by step_expansion after an improving sweep, up to
    max_step_factor times its initial value, and halves after a failed one.
    """
    max_step = settings.max_step_factor * step
    x = start.copy()
    fx, _ = penalty(x)
    best, best_model, best_bound = x.copy(), penalty.model(x), start_bound
    budget = settings.max_local_evals
    used = 0
    while step >= settings.min_step and used < budget:
        changed = False
        for i in range(x.size):
            for direction in (-1.0, 1.0):
                trial = x.copy()
                trial[i] += direction * step
                value, bound = penalty(trial)
                used += 1
                if value < fx:
                    x, fx, changed = trial, value, True
                    if bound <= penalty.budget:
                        model_value = penalty.model(trial)
                        if model_value < best_model:
                            best, best_model, best_bound = trial.copy(), model_value, bound
        if changed:
            step = min(step * settings.step_expansion, max_step)
        else:
            step /= 2.0
    return best, best_model, best_bound


def _advance_seed(
    penalty: _PenaltyFunction, point: np.ndarray, bound: float, target: np.ndarray, fractions: Sequence[float]
) -> tuple[np.ndarray, float]:
    """Replace a feasible seed by the lowest-model feasible point on its segment toward target."""
    best, best_model = (point, bound), penalty.model(point)
    for fraction in fractions:
        trial = point + fraction * (target - point)
        trial_bound = penalty.bound(trial)
        if trial_bound <= penalty.budget and penalty.model(trial) < best_model:
            best, best_model = (trial, trial_bound), penalty.model(trial)
    return best


def solve_half_space(
    model: QuadModel,
    ctx: CandidateContext,
    budget: float,
    side: Side,
    center,
    half_width: float,
    settings: SolverSettings | None = None,
    extra_seeds: Sequence[np.ndarray] = (),
    stream: int = 0,
) -> HalfSpaceSolution:
    """
    Minimize model over {u on side of ctx.hyperplane : E(u) <= budget}.

    Seeds are extra_seeds followed by uniform draws from the box
    center +- half_width, kept when feasible on this side. Each seed then
    moves to the best feasible point on its segment toward the stationary
    point of the model. Draws come from a Generator seeded with
    (settings.seed, stream, side), so results are deterministic. Raises
    InfeasibleSubproblemError when no feasible seed turns up.
    """
    settings = settings or SolverSettings()
    side = Side(side)
    center = np.asarray(center, dtype=float)
    rho = settings.penalty_base * (1.0 + abs(model.base_value))
    penalty = _PenaltyFunction(model, ctx, budget, side, rho)

    seeds: list[tuple[np.ndarray, float]] = []
    for seed_point in extra_seeds:
        point = np.asarray(seed_point, dtype=float)
        bound = penalty.bound(point)
        if bound <= budget:
            seeds.append((point, bound))

    rng = np.random.default_rng([settings.seed, stream, 0 if side is Side.PLUS else 1])
    sampled = 0
    for _ in range(settings.sampling_rounds):
        if len(seeds) >= settings.multistart_count:
            break
        draws = rng.uniform(center - half_width, center + half_width, size=(settings.multistart_count, center.size))
        sampled += draws.shape[0]
        for point in draws:
            bound = penalty.bound(point)
            if bound <= budget:
                seeds.append((point, bound))
    seeds = seeds[: settings.multistart_count]
    if not seeds:
        raise InfeasibleSubproblemError(
            "No feasible start found", {"side": side.value, "budget": budget, "sampled": sampled}
        )
    try:
        target = model.unconstrained_minimizer()
    except np.linalg.LinAlgError:
        target = None
    if target is not None and np.all(np.isfinite(target)):
        seeds = [_advance_seed(penalty, point, bound, target, settings.line_fractions) for point, bound in seeds]
    _log.debug("Side %s: %d feasible seeds from %d draws", side.value, len(seeds), sampled)

    step = settings.initial_step_fraction * half_width
    best_point, best_value, best_bound = None, math.inf, math.inf
    local_values = []
    for start, start_bound in seeds:
        point, value, bound = _compass_search(penalty, start, start_bound, step, settings)
        local_values.append(value)
        if value < best_value:
            best_point, best_value, best_bound = point, value, bound

    return HalfSpaceSolution(
        side=side,
        point=best_point,
        model_value=best_value,
        bound_value=best_bound,
        feasible_seeds=len(seeds),
        local_solutions=local_values,
        evaluations=penalty.evaluations,
    )
