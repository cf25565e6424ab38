"""
Sequential-programming derivative-free optimizer with duality constraints.

The window holds the n_u + 1 most recent iterates, newest first; the newest
is the reference and base point of the model

    m_k(u) = 1/2 (u - u_k)^T (L I) (u - u_k) + f~(u_k) + lambda_k^T (u - u_k).

Each step minimizes m_k on both sides of the hyperplane through the n_u
newest points, subject to E(u) <= E_k^U where E is the radial (variant 1a)
or simplex (variant 1b) candidate bound, and accepts the better side.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import DfoConfig, Variant
from .errors import (
    BothSidesInfeasibleError,
    DegenerateCandidateError,
    InfeasibleSubproblemError,
    NonpositiveStepError,
)
from .gradient import QuadModel, quadratic_model
from .oracle import NoisyOracle
from .sample_set import SampleSet, build_sample_set, ffd_set
from .subproblem import HalfSpaceSolution, Side, SolverSettings, solve_half_space
from .total_bounds import CandidateContext, anchor_circumcenter, candidate_bound, min_apex_bound

_log = logging.getLogger(__name__)

# Model values closer than this count as a tie, resolved toward side +.
TIE_TOLERANCE = 1e-12

# Relative headroom above the apex bound when it replaces the budget.
FALLBACK_MARGIN = 0.01


@dataclass
class IterateRecord:
    """One accepted step."""

    iteration: int
    point: np.ndarray
    f_noisy: float
    model_value: float
    budget: float
    bound_value: float
    side: Side
    evals: int
    inflations: int = 0
    fallback: bool = False
    plus_value: float | None = None
    minus_value: float | None = None

    def to_dict(self) -> dict:
        return {
            "iter": self.iteration,
            "point": self.point.tolist(),
            "f_noisy": self.f_noisy,
            "m_k": self.model_value,
            "E_budget": self.budget,
            "E_value": self.bound_value,
            "side": self.side.value,
            "evals": self.evals,
            "inflations": self.inflations,
            "fallback": self.fallback,
            "m_plus": self.plus_value,
            "m_minus": self.minus_value,
        }


@dataclass
class IterateTrace:
    """Initial FFD evaluations plus the append-only list of accepted steps."""

    initial_points: np.ndarray
    initial_values: np.ndarray
    records: list[IterateRecord] = field(default_factory=list)
    stop_reason: str = ""

    def append(self, record: IterateRecord) -> None:
        self.records.append(record)

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def points(self) -> np.ndarray:
        """Every evaluated point in evaluation order."""
        accepted = [r.point for r in self.records]
        return np.vstack([self.initial_points, *accepted]) if accepted else self.initial_points.copy()

    @property
    def values(self) -> np.ndarray:
        return np.concatenate([self.initial_values, [r.f_noisy for r in self.records]])

    @property
    def final_point(self) -> np.ndarray:
        return self.records[-1].point if self.records else self.initial_points[0]

    def best(self) -> tuple[np.ndarray, float]:
        """Point with the lowest noisy value."""
        values = self.values
        index = int(np.argmin(values))
        return self.points[index], float(values[index])

    def to_dict(self) -> dict:
        return {
            "initial_points": self.initial_points.tolist(),
            "initial_values": self.initial_values.tolist(),
            "records": [r.to_dict() for r in self.records],
            "stop_reason": self.stop_reason,
        }


@dataclass(eq=False)
class DfoState:
    """Current interpolation window and run bookkeeping."""

    window: SampleSet
    values: np.ndarray
    trace: IterateTrace
    iteration: int = 0
    small_steps: int = 0

    @property
    def n_u(self) -> int:
        return self.window.n_u

    @property
    def current(self) -> np.ndarray:
        return self.window.points[0]


def init_ffd(oracle: NoisyOracle, u0, h: float) -> DfoState:
    """Evaluate the forward finite-difference simplex at u0 with step h."""
    if not h > 0:
        raise NonpositiveStepError("Initial step must be positive", {"h": h})
    window = ffd_set(u0, h)
    values = np.array([oracle(p) for p in window.points])
    _log.info("FFD init at %s with h=%.6g", window.points[0], h)
    trace = IterateTrace(initial_points=window.points.copy(), initial_values=values.copy())
    return DfoState(window=window, values=values, trace=trace)


def build_model_k(state: DfoState, config: DfoConfig) -> QuadModel:
    """Quadratic interpolation model with H_k = L I on the window."""
    return quadratic_model(state.window, state.values, config.lipschitz * np.eye(state.n_u))


def select_budget(state: DfoState, config: DfoConfig, model: QuadModel | None = None) -> float:
    """E_k^U: max(||g_k|| / divisor, floor) for variant 1a, the floor for 1b."""
    floor = config.budget_floor(state.n_u)
    if config.variant is Variant.SIMPLEX:
        return floor
    model = model or build_model_k(state, config)
    return max(float(np.linalg.norm(model.simplex_gradient)) / config.budget_divisor, floor)


def _solver_settings(config: DfoConfig) -> SolverSettings:
    return SolverSettings(multistart_count=config.multistart_count, seed=config.seed)


def _mirror(ctx: CandidateContext, point: np.ndarray) -> np.ndarray:
    return point - 2.0 * ctx.hyperplane.signed_distance(point) * ctx.hyperplane.normal


def _apex_height(ctx: CandidateContext, config: DfoConfig) -> float:
    return max(anchor_circumcenter(ctx)[1], config.init_step)


def _apex_seeds(ctx: CandidateContext, config: DfoConfig) -> list[np.ndarray]:
    """The lowest-bound apex point and its mirror image."""
    try:
        point, _ = min_apex_bound(ctx, _apex_height(ctx, config))
    except DegenerateCandidateError:
        return []
    return [point, _mirror(ctx, point)]


def _apex_bound(ctx: CandidateContext, config: DfoConfig) -> float:
    try:
        return min_apex_bound(ctx, _apex_height(ctx, config))[1]
    except DegenerateCandidateError:
        return 0.0


def _solve_both_sides(
    state: DfoState, config: DfoConfig, model: QuadModel, budget: float, ctx: CandidateContext
) -> dict[Side, HalfSpaceSolution]:
    window = state.window
    oldest = window.points[state.n_u]
    seeds = [oldest, _mirror(ctx, oldest), *_apex_seeds(ctx, config)]

    # Sampling box covers the window and the model's stationary point.
    centroid = window.points.mean(axis=0)
    center, half_width = centroid, 2.0 * window.circumsphere.radius
    stationary = model.unconstrained_minimizer()
    if np.all(np.isfinite(stationary)):
        seeds.append(stationary)
        center = 0.5 * (centroid + stationary)
        half_width = max(half_width, float(np.linalg.norm(stationary - centroid)))

    solutions = {}
    for side in (Side.PLUS, Side.MINUS):
        try:
            solutions[side] = solve_half_space(
                model, ctx, budget, side, center, half_width, _solver_settings(config), seeds, state.iteration
            )
        except InfeasibleSubproblemError as exc:
            _log.debug("Iteration %d: %s", state.iteration, exc)
    return solutions


def step(state: DfoState, oracle: NoisyOracle, config: DfoConfig) -> DfoState:
    """
    One iteration: solve both half-space problems, accept the lower model
    value (ties to +), evaluate once and slide the window.
    """
    model = build_model_k(state, config)
    budget = select_budget(state, config, model)
    ctx = CandidateContext(state.window.points[: state.n_u], config.lipschitz, config.delta, config.variant.bound_kind)
    inflations = 0
    fallback = False
    solutions = _solve_both_sides(state, config, model, budget, ctx)
    while not solutions:
        if inflations < config.max_budget_inflations:
            inflations += 1
            budget *= config.budget_inflation
            _log.warning("Iteration %d: inflating budget to %.6g", state.iteration, budget)
        elif config.anchor_fallback and not fallback:
            fallback = True
            budget = max(budget, (1.0 + FALLBACK_MARGIN) * _apex_bound(ctx, config))
            _log.warning("Iteration %d: raising budget to the anchor apex bound %.6g", state.iteration, budget)
        else:
            raise BothSidesInfeasibleError(
                "Both half-space subproblems are infeasible",
                trace=state.trace,
                details={"iteration": state.iteration, "budget": budget, "inflations": inflations},
            )
        solutions = _solve_both_sides(state, config, model, budget, ctx)

    plus, minus = solutions.get(Side.PLUS), solutions.get(Side.MINUS)
    chosen = plus
    if plus is None or (minus is not None and minus.model_value < plus.model_value - TIE_TOLERANCE):
        chosen = minus

    value = oracle(chosen.point)
    n_u = state.n_u
    points = np.vstack([chosen.point, state.window.points[:n_u]])
    values = np.concatenate([[value], state.values[:n_u]])
    distance = float(np.linalg.norm(chosen.point - state.current))

    record = IterateRecord(
        iteration=state.iteration + 1,
        point=chosen.point.copy(),
        f_noisy=value,
        model_value=chosen.model_value,
        budget=budget,
        bound_value=chosen.bound_value,
        side=chosen.side,
        evals=oracle.eval_count,
        inflations=inflations,
        fallback=fallback,
        plus_value=None if plus is None else plus.model_value,
        minus_value=None if minus is None else minus.model_value,
    )
    state.trace.append(record)
    _log.info(
        "Iteration %d: side %s, m_k=%.6g, f~=%.6g, E=%.4g <= %.4g, step=%.3g",
        record.iteration,
        chosen.side.value,
        chosen.model_value,
        value,
        chosen.bound_value,
        budget,
        distance,
    )
    return DfoState(
        window=build_sample_set(points, 0),
        values=values,
        trace=state.trace,
        iteration=state.iteration + 1,
        small_steps=state.small_steps + 1 if distance < config.step_tolerance else 0,
    )


def run(
    oracle: NoisyOracle, u0, config: DfoConfig, callback: Callable[[IterateRecord], bool] | None = None
) -> IterateTrace:
    """
    FFD initialization followed by steps until max_iters, or until n_u
    consecutive steps are shorter than step_tolerance.

    callback, when given, sees every accepted record; a true return stops
    the run with stop_reason "callback".
    """
    state = init_ffd(oracle, u0, config.init_step)
    state.trace.stop_reason = "max_iters"
    while state.iteration < config.max_iters:
        try:
            state = step(state, oracle, config)
        except BothSidesInfeasibleError as exc:
            state.trace.stop_reason = "infeasible"
            exc.trace = state.trace
            raise
        if state.small_steps >= state.n_u:
            state.trace.stop_reason = "converged"
            break
        if callback is not None and callback(state.trace.records[-1]):
            state.trace.stop_reason = "callback"
            break
    final = state.trace.final_point
    _log.info(
        "Stopped (%s) after %d iterations at %s, %d evaluations",
        state.trace.stop_reason,
        state.iteration,
        final,
        oracle.eval_count,
    )
    return state.trace


def replay_bounds(trace: IterateTrace, config: DfoConfig) -> list[float]:
    """Recompute E(u_{k+1}) for every accepted step from the trace alone."""
    n_u = trace.initial_points.shape[1]
    window = trace.initial_points.copy()
    values = []
    for record in trace.records:
        ctx = CandidateContext(window[:n_u], config.lipschitz, config.delta, config.variant.bound_kind)
        values.append(candidate_bound(ctx, record.point))
        window = np.vstack([record.point, window[:n_u]])
    return values
