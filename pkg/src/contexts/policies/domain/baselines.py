"""Model-free baselines for non-stationary bandits."""
from collections import deque
import math

import numpy as np

from src.shared.domain.exceptions import ConfigurationError
from src.contexts.policies.domain.base import BanditPolicy, argmax_lowest


MAX_BERNOULLI_VARIANCE = 0.25


class UCB1TunedPolicy(BanditPolicy):
    """Sample mean plus sqrt((ln t / n) min(1/4, V)), V the variance upper bound, t the 1-based step."""

    name = "ucb1_tuned"

    def __init__(self, n_arms: int):
        super().__init__(n_arms)
        self.sums = np.zeros(n_arms)
        self.sums_of_squares = np.zeros(n_arms)

    def _select(self, rng: np.random.Generator) -> int:
        n = self.counts.astype(float)
        log_t = math.log(self.t + 1)
        mean = self.sums / n
        variance = np.maximum(self.sums_of_squares / n - mean ** 2, 0.0) + np.sqrt(2.0 * log_t / n)
        indices = mean + np.sqrt(log_t / n * np.minimum(MAX_BERNOULLI_VARIANCE, variance))
        self.last_indices = indices
        return argmax_lowest(indices)

    def _observe(self, action: int, reward: float) -> None:
        self.sums[action] += reward
        self.sums_of_squares[action] += reward * reward


class DiscountedUCBPolicy(BanditPolicy):
    """Discounted means with padding 2 sqrt(xi ln n_gamma / N_gamma)."""

    name = "d_ucb"

    def __init__(self, n_arms: int, gamma: float, xi: float = 0.6):
        super().__init__(n_arms)
        if not 0.0 < gamma <= 1.0:
            raise ConfigurationError(f"Discount gamma must lie in (0, 1], got {gamma}")
        if not xi > 0:
            raise ConfigurationError(f"Padding weight xi must be positive, got {xi}")
        self.gamma = gamma
        self.xi = xi
        self.discounted_sums = np.zeros(n_arms)
        self.discounted_counts = np.zeros(n_arms)

    def _select(self, rng: np.random.Generator) -> int:
        counts = self.discounted_counts
        n_gamma = max(float(counts.sum()), 1.0)
        seen = counts > 0
        safe = np.where(seen, counts, 1.0)
        padded = self.discounted_sums / safe + 2.0 * np.sqrt(self.xi * math.log(n_gamma) / safe)
        indices = np.where(seen, padded, np.inf)
        self.last_indices = indices
        return argmax_lowest(indices)

    def _observe(self, action: int, reward: float) -> None:
        self.discounted_sums *= self.gamma
        self.discounted_counts *= self.gamma
        self.discounted_sums[action] += reward
        self.discounted_counts[action] += 1.0


class SlidingWindowUCBPolicy(BanditPolicy):
    """Means and counts over the last tau steps; arms missing from the window get an infinite index."""

    name = "sw_ucb"

    def __init__(self, n_arms: int, tau: int, xi: float = 0.6):
        super().__init__(n_arms)
        if tau < 1:
            raise ConfigurationError(f"Window tau must be at least 1, got {tau}")
        if not xi > 0:
            raise ConfigurationError(f"Padding weight xi must be positive, got {xi}")
        self.tau = int(tau)
        self.xi = xi
        self.window = deque()
        self.window_sums = np.zeros(n_arms)
        self.window_counts = np.zeros(n_arms, dtype=np.int64)

    def _select(self, rng: np.random.Generator) -> int:
        counts = self.window_counts
        seen = counts > 0
        safe = np.where(seen, counts, 1).astype(float)
        # plays currently held by the window
        log_term = math.log(min(self.t, self.tau))
        padded = self.window_sums / safe + np.sqrt(self.xi * log_term / safe)
        indices = np.where(seen, padded, np.inf)
        self.last_indices = indices
        return argmax_lowest(indices)

    def _observe(self, action: int, reward: float) -> None:
        self.window.append((action, reward))
        self.window_sums[action] += reward
        self.window_counts[action] += 1
        if len(self.window) > self.tau:
            old_action, old_reward = self.window.popleft()
            self.window_sums[old_action] -= old_reward
            self.window_counts[old_action] -= 1


class Exp3SPolicy(BanditPolicy):
    """Exponential weights with uniform exploration gamma and weight sharing alpha."""

    name = "exp3s"
    requires_init = False

    def __init__(self, n_arms: int, gamma: float, alpha: float):
        super().__init__(n_arms)
        if not 0.0 < gamma <= 1.0:
            raise ConfigurationError(f"Exploration rate must lie in (0, 1], got {gamma}")
        if not 0.0 <= alpha <= 1.0:
            raise ConfigurationError(f"Mixing rate must lie in [0, 1], got {alpha}")
        self.gamma = gamma
        self.alpha = alpha
        self.weights = np.full(n_arms, 1.0 / n_arms)

    def probabilities(self) -> np.ndarray:
        normalized = self.weights / self.weights.sum()
        return (1.0 - self.gamma) * normalized + self.gamma / self.n_arms

    def _select(self, rng: np.random.Generator) -> int:
        p = self.probabilities()
        self.last_indices = p
        return int(rng.choice(self.n_arms, p=p))

    def _observe(self, action: int, reward: float) -> None:
        p = self.probabilities()
        estimate = np.zeros(self.n_arms)
        estimate[action] = reward / p[action]
        total = self.weights.sum()
        updated = self.weights * np.exp(self.gamma * estimate / self.n_arms) + math.e * self.alpha / self.n_arms * total
        self.weights = updated / updated.sum()


class RandomPolicy(BanditPolicy):
    """Uniformly random arm every step."""

    name = "random"
    requires_init = False

    def _select(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.n_arms))

    def _observe(self, action: int, reward: float) -> None:
        pass
