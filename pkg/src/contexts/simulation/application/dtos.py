"""Declarative experiment description, validated with pydantic.

Defaults that depend on the horizon or on the arm boxes are resolved at
validation time, so a dumped config re-validates to an equal object.
"""
import math
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.contexts.dynamics.domain.value_objects import SPECTRAL_NORM_TOLERANCE
from src.contexts.policies.domain.factory import (
    DEFAULT_XI, default_discount, default_exp3_gamma, default_mixing, default_window
)
from src.contexts.rewards.domain.value_objects import DEFAULT_THETA_FLOOR


FamilyName = Literal["logistic_glm", "laplace_agent"]
AlgorithmName = Literal["rogue_ucb", "tuned_rogue_ucb", "ucb1_tuned", "d_ucb", "sw_ucb", "exp3s", "random"]
OracleMode = Literal["greedy", "exact_dp"]


def _check_interval(name: str, bounds: Tuple[float, float]) -> None:
    if not bounds[0] < bounds[1]:
        raise ValueError(f"{name}: lower bound {bounds[0]} must be below upper bound {bounds[1]}")


class DynamicsDto(BaseModel):
    """Scalar coefficients of x' = clip(A x + B u + K)."""

    model_config = ConfigDict(extra="forbid")

    A: float
    B: float
    K: float

    @field_validator("A")
    @classmethod
    def spectral_norm(cls, value: float) -> float:
        if abs(value) > 1.0 + SPECTRAL_NORM_TOLERANCE:
            raise ValueError(f"|A| must be at most 1, got {value}")
        return value


class TruthDto(BaseModel):
    model_config = ConfigDict(extra="forbid")

    theta: float
    x0: float


class ArmConfig(BaseModel):
    """One arm: dynamics, reward family, boxes and the hidden truth."""

    model_config = ConfigDict(extra="forbid")

    name: str = ""
    family: FamilyName
    dynamics: DynamicsDto
    truth: TruthDto
    state_box: Tuple[float, float] = (0.0, 1.0)
    theta_box: Optional[Tuple[float, float]] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    theta_floor: float = Field(default=DEFAULT_THETA_FLOOR, gt=0)

    @model_validator(mode="after")
    def resolve_and_check(self) -> "ArmConfig":
        _check_interval("state_box", self.state_box)
        if self.family == "logistic_glm":
            if self.alpha is None or self.beta is None:
                raise ValueError("alpha and beta are required for the logistic_glm family")
            if self.theta_box is None:
                self.theta_box = (0.0, 1.0)
        else:
            if self.alpha is not None or self.beta is not None:
                raise ValueError("alpha and beta apply to the logistic_glm family only")
            if self.theta_box is None:
                self.theta_box = (self.theta_floor, 1.0)
            if not self.theta_box[0] > 0:
                raise ValueError(f"theta_box: laplace_agent scales need a positive lower bound, got {self.theta_box[0]}")
        _check_interval("theta_box", self.theta_box)

        if not self.theta_box[0] <= self.truth.theta <= self.theta_box[1]:
            raise ValueError(f"truth.theta={self.truth.theta} lies outside theta_box {list(self.theta_box)}")
        if not self.state_box[0] <= self.truth.x0 <= self.state_box[1]:
            raise ValueError(f"truth.x0={self.truth.x0} lies outside state_box {list(self.state_box)}")
        return self


class AlgorithmConfig(BaseModel):
    """Algorithm name and hyper-parameters; unset values are filled from the horizon."""

    model_config = ConfigDict(extra="forbid")

    name: AlgorithmName
    gamma: Optional[float] = Field(default=None, gt=0, le=1)
    xi: Optional[float] = Field(default=None, gt=0)
    tau: Optional[int] = Field(default=None, ge=1)
    exp3_gamma: Optional[float] = Field(default=None, gt=0, le=1)
    alpha_mix: Optional[float] = Field(default=None, ge=0, le=1)

    def hyperparameters(self) -> Dict[str, Any]:
        return self.model_dump(exclude={"name"}, exclude_none=True)


class ConfidenceConfigDto(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lipschitz_f: float = Field(default=1.0, gt=0)
    lipschitz_p: float = Field(default=1.0, gt=0)
    sigma: float = Field(default=0.5, gt=0)
    eta: Optional[float] = Field(default=None, gt=0)
    diam_x: Optional[float] = Field(default=None, ge=0)
    diam_xtheta: Optional[float] = Field(default=None, ge=0)
    d_x: int = Field(default=1, ge=1)
    d_theta: int = Field(default=1, ge=1)


class SearchConfigDto(BaseModel):
    model_config = ConfigDict(extra="forbid")

    theta_points: int = Field(default=101, ge=2)
    state_points: int = Field(default=101, ge=2)
    refine_iterations: int = Field(default=200, ge=0)
    tolerance: float = Field(default=1e-9, gt=0)
    refit_every: int = Field(default=1, ge=1)


class ExperimentConfig(BaseModel):
    """Everything one benchmark run needs."""

    model_config = ConfigDict(extra="forbid")

    horizon: int = Field(ge=1)
    replicates: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)
    oracle_mode: OracleMode = "greedy"
    oracle_budget: int = Field(default=2 ** 20, ge=1)
    output_dir: Optional[str] = None
    arms: List[ArmConfig] = Field(min_length=1)
    algorithms: List[AlgorithmConfig] = Field(min_length=1)
    confidence: ConfidenceConfigDto = Field(default_factory=ConfidenceConfigDto)
    search: SearchConfigDto = Field(default_factory=SearchConfigDto)

    @field_validator("algorithms", mode="before")
    @classmethod
    def names_as_entries(cls, value: Any) -> Any:
        if isinstance(value, list):
            return [{"name": item} if isinstance(item, str) else item for item in value]
        return value

    @model_validator(mode="after")
    def resolve_defaults(self) -> "ExperimentConfig":
        if self.horizon < len(self.arms):
            raise ValueError(f"horizon={self.horizon} must be at least the number of arms ({len(self.arms)})")
        names = [algorithm.name for algorithm in self.algorithms]
        if len(set(names)) != len(names):
            raise ValueError(f"algorithms must not repeat, got {names}")

        n_arms, horizon = len(self.arms), self.horizon
        for algorithm in self.algorithms:
            if algorithm.name in ("d_ucb", "sw_ucb") and algorithm.xi is None:
                algorithm.xi = DEFAULT_XI
            if algorithm.name == "d_ucb" and algorithm.gamma is None:
                algorithm.gamma = default_discount(horizon)
            if algorithm.name == "sw_ucb" and algorithm.tau is None:
                algorithm.tau = default_window(horizon)
            if algorithm.name == "exp3s":
                if algorithm.exp3_gamma is None:
                    algorithm.exp3_gamma = default_exp3_gamma(n_arms, horizon)
                if algorithm.alpha_mix is None:
                    algorithm.alpha_mix = default_mixing(horizon)

        widths = np.array([[arm.state_box[1] - arm.state_box[0], arm.theta_box[1] - arm.theta_box[0]]
                           for arm in self.arms])
        if self.confidence.diam_x is None:
            self.confidence.diam_x = float(widths[:, 0].max())
        if self.confidence.diam_xtheta is None:
            self.confidence.diam_xtheta = float(max(math.hypot(wx, wt) for wx, wt in widths))
        return self

    @property
    def algorithm_names(self) -> List[str]:
        return [algorithm.name for algorithm in self.algorithms]
