"""
Test objectives with analytic gradients and Hessians.

Each Problem bundles a scalar objective, its gradient and Hessian, the
gradient Lipschitz constant used for it in the bounds, and (where known)
its minimizer. Problems are looked up by name through get_problem().
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.optimize as sp_optimize

from .errors import ConfigError, DimensionMismatchError

_log = logging.getLogger(__name__)

_LN14 = math.log(1.4)

Vector = Callable[[np.ndarray], np.ndarray]


@dataclass(eq=False)
class Problem:
    """A smooth objective on R^n_u with its derivatives."""

    name: str
    dimension: int
    value: Callable[[np.ndarray], float]
    gradient: Vector
    hessian: Callable[[np.ndarray], np.ndarray]
    lipschitz: float
    known_minimizer: np.ndarray | None = None
    sample_points: np.ndarray | None = field(default=None, repr=False)

    def __call__(self, point) -> float:
        u = np.asarray(point, dtype=float).reshape(-1)
        if u.shape[0] != self.dimension:
            raise DimensionMismatchError(
                f"Problem '{self.name}' expects {self.dimension} coordinates", {"got": u.shape[0]}
            )
        return float(self.value(u))

    def minimizer(self, start=None) -> np.ndarray:
        """Analytic minimizer if known, else a BFGS solve from start (default 0)."""
        if self.known_minimizer is not None:
            return self.known_minimizer.copy()
        x0 = np.zeros(self.dimension) if start is None else np.asarray(start, dtype=float)
        result = sp_optimize.minimize(self.value, x0, jac=self.gradient, method="BFGS", options={"gtol": 1e-12})
        _log.debug("Minimizer of %s: %s (%s)", self.name, result.x, result.message)
        return np.asarray(result.x, dtype=float)


def _exponential_quadratic(linear: float) -> tuple[Callable, Vector, Callable]:
    # 2 u1^2 - u1 u2 + u2^2 - linear u1 + 1.4^(2 u1 + u2)
    base = np.array([[4.0, -1.0], [-1.0, 2.0]])
    outer = np.array([[4.0, 2.0], [2.0, 1.0]])

    def value(u):
        return 2 * u[0] ** 2 - u[0] * u[1] + u[1] ** 2 - linear * u[0] + 1.4 ** (2 * u[0] + u[1])

    def gradient(u):
        power = _LN14 * 1.4 ** (2 * u[0] + u[1])
        return np.array([4 * u[0] - u[1] - linear + 2 * power, -u[0] + 2 * u[1] + power])

    def hessian(u):
        return base + _LN14**2 * 1.4 ** (2 * u[0] + u[1]) * outer

    return value, gradient, hessian


def _quadratic(name: str, matrix, linear, lipschitz: float | None = None, **kwargs) -> Problem:
    """f(u) = 1/2 u^T Q u + c^T u."""
    q = np.asarray(matrix, dtype=float)
    c = np.asarray(linear, dtype=float)
    if lipschitz is None:
        lipschitz = float(np.max(np.abs(np.linalg.eigvalsh(q))))
    return Problem(
        name=name,
        dimension=q.shape[0],
        value=lambda u: float(0.5 * u @ q @ u + c @ u),
        gradient=lambda u: q @ u + c,
        hessian=lambda u: q.copy(),
        lipschitz=lipschitz,
        **kwargs,
    )


def example1() -> Problem:
    """Two-dimensional exponential-quadratic with the triangle (0.5,0), (0,1), (1,0)."""
    value, gradient, hessian = _exponential_quadratic(2.0)
    return Problem(
        name="example1",
        dimension=2,
        value=value,
        gradient=gradient,
        hessian=hessian,
        lipschitz=5.3,
        sample_points=np.array([[0.5, 0.0], [0.0, 1.0], [1.0, 0.0]]),
    )


def example2(theta: float = 2.0 / 3.0) -> Problem:
    """u1^2 + 6 u2 sampled at (0, theta), (-1, 0.5), (1, 0.5)."""
    return Problem(
        name="example2",
        dimension=2,
        value=lambda u: float(u[0] ** 2 + 6 * u[1]),
        gradient=lambda u: np.array([2 * u[0], 6.0]),
        hessian=lambda u: np.diag([2.0, 0.0]),
        lipschitz=2.0,
        sample_points=np.array([[0.0, theta], [-1.0, 0.5], [1.0, 0.5]]),
    )


EXAMPLE5_HESSIAN = np.array(
    [
        [2.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, -2.0, 0.0, -1.0, 0.0],
        [1.0, 0.0, 2.0, -2.0, 0.0],
        [0.0, -1.0, -2.0, 2.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -2.0],
    ]
)


def example5() -> Problem:
    """Indefinite five-dimensional quadratic; L is the Hessian spectral radius (4.3014)."""
    return _quadratic("example5", EXAMPLE5_HESSIAN, [0.0, 5.0, 0.0, 0.0, -6.0])


def exp1d(lower: float = 0.5, upper: float = 2.5) -> Problem:
    """exp(u) on [lower, upper] with L = exp(upper)."""
    return Problem(
        name="exp1d",
        dimension=1,
        value=lambda u: float(np.exp(u[0])),
        gradient=lambda u: np.exp(u),
        hessian=lambda u: np.exp(u).reshape(1, 1),
        lipschitz=math.exp(upper),
        sample_points=np.array([[1.0], [2.0]]),
    )


def case1() -> Problem:
    """First case study: the exponential-quadratic with a 3 u1 linear term."""
    value, gradient, hessian = _exponential_quadratic(3.0)
    return Problem(name="case1", dimension=2, value=value, gradient=gradient, hessian=hessian, lipschitz=5.3)


def case2() -> Problem:
    """Second case study: 1/2 u^T (2I) u on R^3, run with L = 2.5."""
    return _quadratic("case2", 2.0 * np.eye(3), np.zeros(3), lipschitz=2.5, known_minimizer=np.zeros(3))


def sphere(dimension: int = 2) -> Problem:
    """||u||^2 on R^dimension."""
    if dimension < 1:
        raise DimensionMismatchError("Sphere dimension must be positive", {"dimension": dimension})
    return _quadratic(
        "sphere", 2.0 * np.eye(dimension), np.zeros(dimension), known_minimizer=np.zeros(dimension)
    )


PROBLEMS: dict[str, Callable[..., Problem]] = {
    "example1": example1,
    "example2": example2,
    "example5": example5,
    "exp1d": exp1d,
    "case1": case1,
    "case2": case2,
    "sphere": sphere,
}


def get_problem(name: str, dimension: int | None = None, **params) -> Problem:
    """
    Instantiate a registered problem by name.

    dimension sizes the sphere and is checked against every other problem.
    """
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise ConfigError(f"Unknown objective: {name}", {"known": sorted(PROBLEMS)}) from None
    if name == "sphere" and dimension is not None:
        params["dimension"] = dimension
    try:
        problem = factory(**params)
    except TypeError as exc:
        raise ConfigError(f"Bad parameters for {name}: {exc}") from None
    if dimension is not None and problem.dimension != dimension:
        raise ConfigError(
            f"Objective {name} is {problem.dimension}-dimensional", {"requested": dimension}
        )
    return problem
