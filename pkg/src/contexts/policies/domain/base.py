from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from src.shared.domain.exceptions import ConfigurationError


def select_init(t: int, n_arms: int) -> Optional[int]:
    """Arm forced at 1-based step t during the initialization pass, or None afterwards."""
    if 1 <= t <= n_arms:
        return t - 1
    return None


def argmax_lowest(values: np.ndarray) -> int:
    """Index of the maximum; ties go to the lowest index."""
    return int(np.argmax(values))


class BanditPolicy(ABC):
    """Sequential decision rule: select an arm, then observe its reward.

    Policies that need one observation per arm pull every arm once, in index
    order, before their main rule applies.
    """

    name: str = ""
    requires_init: bool = True

    def __init__(self, n_arms: int):
        if n_arms < 1:
            raise ConfigurationError(f"A policy needs at least one arm, got {n_arms}")
        self.n_arms = n_arms
        self.t = 0
        self.counts = np.zeros(n_arms, dtype=np.int64)
        self.last_indices: Optional[np.ndarray] = None

    def select(self, rng: np.random.Generator) -> int:
        if self.requires_init:
            forced = select_init(self.t + 1, self.n_arms)
            if forced is not None:
                return forced
        return self._select(rng)

    def observe(self, action: int, reward: float) -> None:
        if not 0 <= action < self.n_arms:
            raise ConfigurationError(f"Arm index {action} outside [0, {self.n_arms})")
        self._observe(action, float(reward))
        self.counts[action] += 1
        self.t += 1

    @abstractmethod
    def _select(self, rng: np.random.Generator) -> int:
        ...

    @abstractmethod
    def _observe(self, action: int, reward: float) -> None:
        ...
