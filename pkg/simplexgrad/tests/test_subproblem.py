"""Tests for the half-space subproblem solver."""

import numpy as np
import pytest

from simplexgrad import (
    CandidateContext,
    InfeasibleSubproblemError,
    QuadModel,
    Side,
    SolverSettings,
    candidate_bound,
    solve_half_space,
)

ANCHORS = np.array([[0.0, -0.5], [0.0, 0.5]])


def _model(center):
    center = np.asarray(center, dtype=float)
    return QuadModel(
        base_point=center,
        base_value=0.0,
        hessian=2.0 * np.eye(2),
        lam=np.zeros(2),
        simplex_gradient=np.zeros(2),
    )


def _ctx():
    return CandidateContext(ANCHORS, 2.0, 0.01)


class TestSolveHalfSpace:
    """Tests for solve_half_space."""

    settings = SolverSettings(multistart_count=4, max_local_evals=200)

    def test_interior_minimizer(self):
        """An interior unconstrained minimizer is returned when offered as a seed."""
        minimizer = np.array([1.0, 0.0])
        solution = solve_half_space(
            _model(minimizer), _ctx(), 5.0, Side.PLUS, [0.5, 0.0], 1.5, self.settings, [minimizer]
        )
        assert solution.side is Side.PLUS
        assert solution.point == pytest.approx(minimizer)
        assert solution.model_value == pytest.approx(0.0)
        assert solution.bound_value <= 5.0

    def test_feasible_and_on_side(self):
        """The returned point satisfies the budget and the side constraint."""
        ctx = _ctx()
        solution = solve_half_space(_model([-2.0, 1.0]), ctx, 2.0, Side.MINUS, [0.0, 0.0], 1.5, self.settings)
        assert ctx.hyperplane.signed_distance(solution.point) < 0
        assert candidate_bound(ctx, solution.point) <= 2.0 + 1e-6
        assert solution.model_value == pytest.approx(_model([-2.0, 1.0])(solution.point))
        assert solution.model_value <= min(solution.local_solutions)

    def test_active_constraint(self):
        """A minimizer outside the feasible region pulls the solution onto the budget surface."""
        ctx = _ctx()
        settings = SolverSettings(multistart_count=4, max_local_evals=2000)
        solution = solve_half_space(_model([0.05, 0.0]), ctx, 1.6, Side.PLUS, [0.5, 0.0], 1.5, settings)
        assert solution.bound_value <= 1.6
        assert solution.bound_value == pytest.approx(1.6, abs=1e-3)

    def test_deterministic(self):
        """Equal seeds give equal solutions."""
        args = (_model([-2.0, 1.0]), _ctx(), 2.0, Side.MINUS, [0.0, 0.0], 1.5, self.settings)
        first = solve_half_space(*args, stream=3)
        second = solve_half_space(*args, stream=3)
        assert np.array_equal(first.point, second.point)
        assert first.model_value == second.model_value

    def test_infeasible(self):
        """A budget below every attainable bound leaves no feasible seed."""
        with pytest.raises(InfeasibleSubproblemError):
            solve_half_space(_model([1.0, 0.0]), _ctx(), 1e-3, Side.PLUS, [0.5, 0.0], 1.5, self.settings)

    def test_seeds_off_side_ignored(self):
        """Seeds on the wrong side never become solutions."""
        solution = solve_half_space(
            _model([-1.0, 0.0]), _ctx(), 5.0, Side.PLUS, [0.5, 0.0], 1.5, self.settings, [np.array([-1.0, 0.0])]
        )
        assert solution.point[0] > 0

    def test_to_dict(self):
        """Solutions serialize their side as + or -."""
        solution = solve_half_space(
            _model([1.0, 0.0]), _ctx(), 5.0, "+", [0.5, 0.0], 1.5, self.settings, [np.array([1.0, 0.0])]
        )
        assert solution.to_dict()["side"] == "+"
        assert solution.to_dict()["feasible_seeds"] >= 1

    def test_step_expands(self):
        """The compass step grows, so a distant minimizer is reached from a small box."""
        settings = SolverSettings(multistart_count=1, max_local_evals=400, line_fractions=())
        solution = solve_half_space(_model([9.0, 0.0]), _ctx(), 50.0, Side.PLUS, [0.5, 0.0], 0.2, settings)
        assert solution.point == pytest.approx([9.0, 0.0], abs=1e-2)

    def test_seeds_advance_to_minimizer(self):
        """A feasible segment toward the model minimizer carries the seed onto it."""
        settings = SolverSettings(multistart_count=1, max_local_evals=10)
        solution = solve_half_space(_model([3.0, 0.0]), _ctx(), 50.0, Side.PLUS, [0.5, 0.0], 0.2, settings)
        assert solution.point == pytest.approx([3.0, 0.0], abs=1e-9)
        assert solution.model_value == pytest.approx(0.0, abs=1e-12)
