from typing import List, Sequence

import numpy as np

from src.shared.domain.exceptions import ConfigurationError
from src.contexts.dynamics.domain.services import scalar_step
from src.contexts.simulation.domain.value_objects import ArmSpec


class Environment:
    """Ground-truth arms whose states all move every step: pulled arms habituate, rested arms recover."""

    def __init__(self, arms: Sequence[ArmSpec], rng: np.random.Generator):
        if not arms:
            raise ConfigurationError("An environment needs at least one arm")
        self.arms = list(arms)
        self.rng = rng
        self.t = 0
        self.states: List[float] = [arm.truth.x0 for arm in self.arms]

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    def expected_reward(self, action: int) -> float:
        return self.arms[action].mean(self.states[action])

    def expected_rewards(self) -> np.ndarray:
        return np.array([arm.mean(x) for arm, x in zip(self.arms, self.states)])

    def step(self, action: int) -> float:
        if not 0 <= action < self.n_arms:
            raise ConfigurationError(f"Arm index {action} outside [0, {self.n_arms})")
        arm = self.arms[action]
        reward = arm.family.sample(arm.truth.theta, self.states[action], self.rng)
        self.states = advance_states(self.arms, self.states, action)
        self.t += 1
        return reward


def advance_states(arms: Sequence[ArmSpec], states: Sequence[float], action: int) -> List[float]:
    return [scalar_step(x, int(a == action), arm.dynamics) for a, (arm, x) in enumerate(zip(arms, states))]


def env_step(env: Environment, action: int) -> float:
    """Draw the chosen arm's reward at its current state, then advance every arm."""
    return env.step(action)
