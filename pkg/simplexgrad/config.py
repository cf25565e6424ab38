"""
Run configuration for the derivative-free optimizer.

DfoConfig is read from a JSON object whose keys are listed in CONFIG_KEYS;
"L" maps to lipschitz, everything else maps by name.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import ConfigError
from .oracle import TRUNCATION_SIGMAS, NoiseModel
from .total_bounds import BoundKind, ffd_error_bound, ffd_min_error_bound, optimal_ffd_step


class Variant(str, Enum):
    """Budget rule and candidate bound of the optimizer."""

    RADIAL = "1a"
    SIMPLEX = "1b"

    @property
    def bound_kind(self) -> BoundKind:
        return BoundKind.RADIAL if self is Variant.RADIAL else BoundKind.SIMPLEX


CONFIG_KEYS = (
    "variant",
    "L",
    "delta",
    "sigma_f",
    "noise_model",
    "u0",
    "init_step",
    "max_iters",
    "step_tolerance",
    "multistart_count",
    "seed",
    "objective",
    "budget_divisor",
    "budget_inflation",
    "max_budget_inflations",
    "anchor_fallback",
)


@dataclass
class DfoConfig:
    """Settings for one optimizer run."""

    lipschitz: float
    variant: Variant = Variant.SIMPLEX
    delta: float | None = None
    sigma_f: float = 0.0
    noise_model: NoiseModel = NoiseModel.GAUSSIAN
    u0: list[float] | None = None
    init_step: float | None = None
    max_iters: int = 60
    step_tolerance: float = 1e-4
    multistart_count: int = 16
    seed: int = 0
    objective: str | None = None
    budget_divisor: float = 4.0
    budget_inflation: float = 1.5
    max_budget_inflations: int = 1
    anchor_fallback: bool = True

    def __post_init__(self) -> None:
        try:
            self.variant = Variant(self.variant)
            self.noise_model = NoiseModel(self.noise_model)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not (self.lipschitz > 0 and math.isfinite(self.lipschitz)):
            raise ConfigError("L must be positive and finite", {"L": self.lipschitz})
        if self.sigma_f < 0:
            raise ConfigError("sigma_f must be nonnegative", {"sigma_f": self.sigma_f})
        if self.delta is None:
            self.delta = TRUNCATION_SIGMAS * self.sigma_f
        if not (self.delta >= 0 and math.isfinite(self.delta)):
            raise ConfigError("delta must be finite and nonnegative", {"delta": self.delta})
        if self.init_step is None:
            if self.delta == 0:
                raise ConfigError("init_step is required when delta is zero")
            self.init_step = optimal_ffd_step(self.lipschitz, self.delta)
        if not self.init_step > 0:
            raise ConfigError("init_step must be positive", {"init_step": self.init_step})
        if self.max_iters < 0:
            raise ConfigError("max_iters must be nonnegative", {"max_iters": self.max_iters})
        if not self.step_tolerance > 0:
            raise ConfigError("step_tolerance must be positive", {"step_tolerance": self.step_tolerance})
        if self.multistart_count < 1:
            raise ConfigError("multistart_count must be at least 1", {"multistart_count": self.multistart_count})
        if not self.budget_divisor > 0:
            raise ConfigError("budget_divisor must be positive", {"budget_divisor": self.budget_divisor})
        if not self.budget_inflation > 1:
            raise ConfigError("budget_inflation must exceed 1", {"budget_inflation": self.budget_inflation})
        if self.max_budget_inflations < 0:
            raise ConfigError("max_budget_inflations must be nonnegative")
        if not isinstance(self.anchor_fallback, bool):
            raise ConfigError("anchor_fallback must be true or false", {"anchor_fallback": self.anchor_fallback})
        if self.u0 is not None:
            self.u0 = [float(x) for x in self.u0]
            if not self.u0:
                raise ConfigError("u0 must have at least one coordinate")

    def budget_floor(self, n_u: int) -> float:
        """
        E*_FFD = 2 sqrt(n_u L delta); with delta = 0 the bound of the initial
        FFD simplex, L sqrt(n_u) init_step / 2.
        """
        if self.delta > 0:
            return ffd_min_error_bound(n_u, self.lipschitz, self.delta)
        return ffd_error_bound(n_u, self.lipschitz, 0.0, self.init_step)

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant.value,
            "L": self.lipschitz,
            "delta": self.delta,
            "sigma_f": self.sigma_f,
            "noise_model": self.noise_model.value,
            "u0": self.u0,
            "init_step": self.init_step,
            "max_iters": self.max_iters,
            "step_tolerance": self.step_tolerance,
            "multistart_count": self.multistart_count,
            "seed": self.seed,
            "objective": self.objective,
            "budget_divisor": self.budget_divisor,
            "budget_inflation": self.budget_inflation,
            "max_budget_inflations": self.max_budget_inflations,
            "anchor_fallback": self.anchor_fallback,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], ignore_unknown: bool = False) -> DfoConfig:
        if not isinstance(data, dict):
            raise ConfigError("Configuration must be a JSON object")
        unknown = sorted(set(data) - set(CONFIG_KEYS))
        if unknown and not ignore_unknown:
            raise ConfigError("Unknown configuration keys", {"keys": unknown})
        if "L" not in data:
            raise ConfigError("Configuration needs the Lipschitz constant 'L'")
        kwargs = {k: v for k, v in data.items() if k in CONFIG_KEYS and k != "L"}
        try:
            return cls(lipschitz=float(data["L"]), **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"Malformed configuration: {exc}") from None

