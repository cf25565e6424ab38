"""
Noisy function oracle.

Wraps a deterministic objective f as f~(u) = f(u) + v(u) with v drawn from
a configurable noise model, and counts evaluations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
import scipy.stats as sp_stats

from .errors import ConfigError

_log = logging.getLogger(__name__)

# Default noise bound, in standard deviations, when delta is not given.
TRUNCATION_SIGMAS = 3.0


class NoiseModel(str, Enum):
    """Distribution of the additive measurement noise."""

    NONE = "none"
    GAUSSIAN = "gaussian"
    TRUNCATED_GAUSSIAN = "truncated_gaussian"
    UNIFORM_BOUNDED = "uniform_bounded"


@dataclass(eq=False)
class NoisyOracle:
    """
    f~(u) = f(u) + v with v from noise_model.

    sigma_f scales the Gaussian models; delta is the declared bound used by
    UNIFORM_BOUNDED (and by TRUNCATED_GAUSSIAN when given, else 3 sigma_f).
    Realisations come from a numpy Generator seeded with seed, so equal
    seeds reproduce equal sequences.
    """

    objective: Callable[[np.ndarray], float]
    noise_model: NoiseModel = NoiseModel.NONE
    sigma_f: float = 0.0
    delta: float | None = None
    seed: int = 0
    eval_count: int = field(default=0, init=False)
    _rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        try:
            self.noise_model = NoiseModel(self.noise_model)
        except ValueError:
            raise ConfigError(
                f"Unknown noise model: {self.noise_model}",
                {"known": [m.value for m in NoiseModel]},
            ) from None
        if self.sigma_f < 0:
            raise ConfigError("sigma_f must be nonnegative", {"sigma_f": self.sigma_f})
        if self.delta is None:
            self.delta = TRUNCATION_SIGMAS * self.sigma_f
        if self.delta < 0:
            raise ConfigError("delta must be nonnegative", {"delta": self.delta})
        if self.noise_model is NoiseModel.TRUNCATED_GAUSSIAN and self.sigma_f > 0 and self.delta == 0:
            raise ConfigError("Truncated Gaussian noise needs a positive bound")
        self._rng = np.random.default_rng(self.seed)

    def noise(self) -> float:
        """Draw one noise realisation."""
        model = self.noise_model
        if model is NoiseModel.NONE or (model is not NoiseModel.UNIFORM_BOUNDED and self.sigma_f == 0):
            return 0.0
        if model is NoiseModel.GAUSSIAN:
            return float(self._rng.normal(0.0, self.sigma_f))
        if model is NoiseModel.UNIFORM_BOUNDED:
            return float(self._rng.uniform(-self.delta, self.delta))
        bound = self.delta / self.sigma_f
        return float(sp_stats.truncnorm.rvs(-bound, bound, scale=self.sigma_f, random_state=self._rng))

    def __call__(self, point) -> float:
        u = np.asarray(point, dtype=float).reshape(-1)
        exact = float(self.objective(u))
        self.eval_count += 1
        value = exact + self.noise()
        _log.debug("Evaluation %d at %s: f=%.10g, f~=%.10g", self.eval_count, u, exact, value)
        return value
