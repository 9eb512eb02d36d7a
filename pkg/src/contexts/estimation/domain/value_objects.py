import math
from typing import Optional, Sequence

import numpy as np

from src.shared.domain.base_value_object import BaseValueObject
from src.shared.domain.exceptions import ConfigurationError, ValidationError
from src.contexts.rewards.domain.value_objects import EstimateOrTruth


class ConfidenceConfig(BaseValueObject):
    """Constants of the concentration bound and of the data-driven radius."""

    def __init__(
        self,
        lipschitz_f: float = 1.0,
        lipschitz_p: float = 1.0,
        sigma: float = 0.5,
        eta: Optional[float] = None,
        diam_x: float = 1.0,
        diam_xtheta: float = math.sqrt(2.0),
        d_x: int = 1,
        d_theta: int = 1,
    ):
        for field, value in (("lipschitz_f", lipschitz_f), ("lipschitz_p", lipschitz_p), ("sigma", sigma)):
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{field} must be positive, got {value}")
        if eta is not None and not (math.isfinite(eta) and eta > 0):
            raise ConfigurationError(f"eta must be positive when given, got {eta}")
        for field, value in (("diam_x", diam_x), ("diam_xtheta", diam_xtheta)):
            if not (math.isfinite(value) and value >= 0):
                raise ConfigurationError(f"{field} must be non-negative, got {value}")
        if d_x < 1 or d_theta < 1:
            raise ConfigurationError(f"Dimensions must be at least 1, got d_x={d_x}, d_theta={d_theta}")

        self.lipschitz_f = float(lipschitz_f)
        self.lipschitz_p = float(lipschitz_p)
        self.sigma = float(sigma)
        self.eta = None if eta is None else float(eta)
        self.diam_x = float(diam_x)
        self.diam_xtheta = float(diam_xtheta)
        self.d_x = int(d_x)
        self.d_theta = int(d_theta)


class SearchConfig(BaseValueObject):
    """Grid resolution and refinement settings for the likelihood and UCB searches.

    refit_every counts observations of the arm: the fit and its confidence
    region are recomputed once that many new rewards have arrived.
    """

    def __init__(
        self,
        theta_points: int = 101,
        state_points: int = 101,
        refine_iterations: int = 200,
        tolerance: float = 1e-9,
        refit_every: int = 1,
        chunk_elements: int = 2_000_000,
    ):
        if theta_points < 2 or state_points < 2:
            raise ConfigurationError(
                f"Grids need at least 2 points per axis, got {theta_points}x{state_points}"
            )
        if refine_iterations < 0:
            raise ConfigurationError(f"refine_iterations must be non-negative, got {refine_iterations}")
        if not tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {tolerance}")
        if refit_every < 1:
            raise ConfigurationError(f"refit_every must be at least 1, got {refit_every}")
        if chunk_elements < 1:
            raise ConfigurationError(f"chunk_elements must be positive, got {chunk_elements}")
        self.theta_points = int(theta_points)
        self.state_points = int(state_points)
        self.refine_iterations = int(refine_iterations)
        self.tolerance = float(tolerance)
        self.refit_every = int(refit_every)
        self.chunk_elements = int(chunk_elements)


class MLEFit(BaseValueObject):
    """Maximum-likelihood estimate with its negative mean log-likelihood."""

    def __init__(self, estimate: EstimateOrTruth, objective: float, n_obs: int):
        if not math.isfinite(objective):
            raise ValidationError(f"MLE objective must be finite, got {objective}")
        if n_obs < 1:
            raise ValidationError(f"An MLE needs at least one observation, got {n_obs}")
        self.estimate = estimate
        self.objective = float(objective)
        self.n_obs = int(n_obs)


class ArmHistory(BaseValueObject):
    """One arm's view of an episode: its 0/1 pull indicator per step and the rewards it produced."""

    def __init__(self, indicators: Sequence[int], rewards: Sequence[float]):
        ind = np.asarray(indicators, dtype=np.int64).reshape(-1)
        if ind.size and not np.all((ind == 0) | (ind == 1)):
            raise ValidationError("Pull indicators must be 0 or 1")
        rew = np.asarray(rewards, dtype=float).reshape(-1)
        if rew.size != int(ind.sum()):
            raise ValidationError(f"Got {rew.size} rewards for {int(ind.sum())} pulls")
        self.indicators = ind
        self.rewards = rew

    @classmethod
    def from_episode(cls, arm: int, actions: Sequence[int], rewards: Sequence[float]) -> "ArmHistory":
        actions = np.asarray(actions, dtype=np.int64)
        mask = actions == arm
        return cls(mask.astype(np.int64), np.asarray(rewards, dtype=float)[mask])

    @property
    def pull_times(self) -> np.ndarray:
        return np.flatnonzero(self.indicators)

    @property
    def n_obs(self) -> int:
        return int(self.rewards.size)

    @property
    def steps(self) -> int:
        return int(self.indicators.size)
