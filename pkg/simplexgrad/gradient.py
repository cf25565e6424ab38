"""
Simplex gradients and interpolation models.

The simplex gradient of n_u + 1 poised points is g = U^-T y with
y_j = f(u_j) - f(u_0). The linear model m(u) = c + g^T u interpolates all
points; the quadratic model adds a prescribed Hessian H and a correction
vector lambda so that it still interpolates every point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AsymmetricHessianError, DimensionMismatchError
from .sample_set import SampleSet


@dataclass(frozen=True, eq=False)
class LinearModel:
    """m(u) = intercept + gradient . u"""

    intercept: float
    gradient: np.ndarray

    def __call__(self, point) -> float:
        return float(self.intercept + self.gradient @ np.asarray(point, dtype=float))

    def to_dict(self) -> dict:
        return {"intercept": self.intercept, "gradient": self.gradient.tolist()}


@dataclass(frozen=True, eq=False)
class QuadModel:
    """
    m_k(u) = 1/2 (u - u_k)^T H (u - u_k) + f(u_k) + lambda^T (u - u_k)

    simplex_gradient is g_k = U_k^-T y_k, kept alongside for budget rules.
    """

    base_point: np.ndarray
    base_value: float
    hessian: np.ndarray
    lam: np.ndarray
    simplex_gradient: np.ndarray

    def __call__(self, point) -> float:
        step = np.asarray(point, dtype=float) - self.base_point
        return float(0.5 * step @ self.hessian @ step + self.base_value + self.lam @ step)

    def gradient_at(self, point) -> np.ndarray:
        step = np.asarray(point, dtype=float) - self.base_point
        return self.hessian @ step + self.lam

    def unconstrained_minimizer(self) -> np.ndarray:
        """Stationary point u_k - H^-1 lambda (H must be nonsingular)."""
        return self.base_point - np.linalg.solve(self.hessian, self.lam)

    def to_dict(self) -> dict:
        return {
            "base_point": self.base_point.tolist(),
            "base_value": self.base_value,
            "lambda": self.lam.tolist(),
            "simplex_gradient": self.simplex_gradient.tolist(),
        }


@dataclass(frozen=True, eq=False)
class GradientError:
    """Gradient error, optionally split into truncation and noise parts."""

    total: np.ndarray
    truncation: np.ndarray | None = None
    noise: np.ndarray | None = None

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.total))


def simplex_gradient(sample_set: SampleSet, values) -> np.ndarray:
    """g = U^-T y; independent of which point is the reference."""
    return sample_set.solve_transposed(sample_set.differences(values))


def linear_model(sample_set: SampleSet, values) -> LinearModel:
    """Linear interpolating model through every sample point."""
    vals = np.asarray(values, dtype=float).reshape(-1)
    g = simplex_gradient(sample_set, vals)
    intercept = float(vals[sample_set.ref_index] - g @ sample_set.reference)
    return LinearModel(intercept=intercept, gradient=g)


def _check_hessian(hessian, n_u: int) -> np.ndarray:
    matrix = np.atleast_2d(np.asarray(hessian, dtype=float))
    if matrix.shape != (n_u, n_u):
        raise DimensionMismatchError(
            "Hessian shape does not match the input dimension",
            {"shape": matrix.shape, "n_u": n_u},
        )
    if np.linalg.norm(matrix - matrix.T) > 1e-10:
        raise AsymmetricHessianError("Hessian must be symmetric")
    return matrix


def quadratic_model(sample_set: SampleSet, values, hessian) -> QuadModel:
    """
    Quadratic interpolation model with prescribed Hessian.

    lambda^T = (y - y_q)^T U^-1 where y_q holds q(u_j) - q(u_0) for
    q(u) = 1/2 (u - u_0)^T H (u - u_0), so the model matches every value.
    """
    H = _check_hessian(hessian, sample_set.n_u)
    vals = np.asarray(values, dtype=float).reshape(-1)
    y = sample_set.differences(vals)
    steps = sample_set.displacement
    y_q = 0.5 * np.einsum("ij,ik,kj->j", steps, H, steps)
    lam = sample_set.solve_transposed(y - y_q)
    return QuadModel(
        base_point=sample_set.reference.copy(),
        base_value=float(vals[sample_set.ref_index]),
        hessian=H,
        lam=lam,
        simplex_gradient=sample_set.solve_transposed(y),
    )


def gradient_error(g, true_grad, truncation=None, noise=None) -> GradientError:
    """epsilon = g - grad f."""
    estimate = np.asarray(g, dtype=float).reshape(-1)
    exact = np.asarray(true_grad, dtype=float).reshape(-1)
    if estimate.shape != exact.shape:
        raise DimensionMismatchError(
            "Gradient dimensions differ", {"g": estimate.shape[0], "true": exact.shape[0]}
        )
    parts = [None if p is None else np.asarray(p, dtype=float).reshape(-1) for p in (truncation, noise)]
    return GradientError(total=estimate - exact, truncation=parts[0], noise=parts[1])


def error_projections(sample_set: SampleSet, epsilon) -> np.ndarray:
    """|epsilon^T (u_j - u_0)| / ||u_j - u_0|| for every column of U."""
    eps = np.asarray(epsilon, dtype=float).reshape(-1)
    return np.abs(eps @ sample_set.displacement) / sample_set.column_norms


def truncation_error_quadratic(sample_set: SampleSet, hessian) -> np.ndarray:
    """
    Exact epsilon_t(u_0) for a quadratic objective with the given Hessian.

    epsilon_t = U^-T [1/2 d_j^T H d_j]_j, independent of the linear part.
    """
    H = _check_hessian(hessian, sample_set.n_u)
    steps = sample_set.displacement
    return sample_set.solve_transposed(0.5 * np.einsum("ij,ik,kj->j", steps, H, steps))
