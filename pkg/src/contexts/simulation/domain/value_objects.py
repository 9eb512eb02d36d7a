from typing import Sequence

import numpy as np

from src.shared.domain.base_value_object import BaseValueObject
from src.shared.domain.exceptions import ValidationError
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.policies.domain.value_objects import ArmModel
from src.contexts.rewards.domain.families import RewardFamily
from src.contexts.rewards.domain.value_objects import EstimateOrTruth


class ArmSpec(BaseValueObject):
    """Ground-truth arm: known dynamics and family plus the hidden (theta, x0)."""

    def __init__(self, dynamics: DynamicsParams, family: RewardFamily, truth: EstimateOrTruth, name: str = ""):
        truth.check_within(family.theta_box, dynamics.state_box)
        self.dynamics = dynamics
        self.family = family
        self.truth = truth
        self.name = name

    @property
    def model(self) -> ArmModel:
        return ArmModel(self.dynamics, self.family)

    def mean(self, x: float) -> float:
        return float(self.family.mean(self.truth.theta, x))


class EpisodeResult(BaseValueObject):
    """Per-step record of one (algorithm, replicate) run; step t is 1-based in reports."""

    def __init__(
        self,
        algorithm: str,
        replicate: int,
        seed: Sequence[int],
        actions: np.ndarray,
        rewards: np.ndarray,
        expected: np.ndarray,
        oracle_expected: np.ndarray,
    ):
        actions = np.asarray(actions, dtype=np.int64)
        lengths = {actions.size, np.size(rewards), np.size(expected), np.size(oracle_expected)}
        if len(lengths) != 1:
            raise ValidationError(f"Episode columns have mismatched lengths {sorted(lengths)}")
        self.algorithm = algorithm
        self.replicate = int(replicate)
        self.seed = [int(s) for s in seed]
        self.actions = actions
        self.rewards = np.asarray(rewards, dtype=float)
        self.expected = np.asarray(expected, dtype=float)
        self.oracle_expected = np.asarray(oracle_expected, dtype=float)

    @property
    def horizon(self) -> int:
        return int(self.actions.size)

    @property
    def cumulative_regret(self) -> np.ndarray:
        return np.cumsum(self.oracle_expected - self.expected)

    @property
    def average_reward(self) -> np.ndarray:
        return np.cumsum(self.rewards) / np.arange(1, self.horizon + 1)


class CurveSet(BaseValueObject):
    """Mean and standard-error bands across replicates of one algorithm."""

    def __init__(
        self,
        algorithm: str,
        replicates: int,
        mean_regret: np.ndarray,
        stderr_regret: np.ndarray,
        mean_average_reward: np.ndarray,
        stderr_average_reward: np.ndarray,
    ):
        self.algorithm = algorithm
        self.replicates = int(replicates)
        self.mean_regret = mean_regret
        self.stderr_regret = stderr_regret
        self.mean_average_reward = mean_average_reward
        self.stderr_average_reward = stderr_average_reward

    @property
    def horizon(self) -> int:
        return int(self.mean_regret.size)

    @property
    def final_regret(self) -> float:
        return float(self.mean_regret[-1])

    @property
    def final_regret_stderr(self) -> float:
        return float(self.stderr_regret[-1])
