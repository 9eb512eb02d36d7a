"""Reward families behind one vectorized interface.

Every method broadcasts over numpy arrays of theta and x so that estimation
can evaluate a whole (theta, x0) grid in one call. Gradients and Fisher
information are with respect to the scalar pair (theta, x).
"""
from abc import ABC, abstractmethod
from math import factorial
from typing import Tuple

import numpy as np
from scipy.special import expit, gammainc, log_expit

from src.shared.domain.box import Box
from src.shared.domain.exceptions import OutOfDomainError
from src.contexts.rewards.domain import services
from src.contexts.rewards.domain.value_objects import LaplaceAgentParams, LogisticGLMParams


Pair = Tuple[np.ndarray, np.ndarray]
Triple = Tuple[np.ndarray, np.ndarray, np.ndarray]


class RewardFamily(ABC):
    """Parametric reward law P(r | theta, x) with bounded mean g(theta, x)."""

    name: str = ""

    @property
    @abstractmethod
    def theta_box(self) -> Box:
        ...

    @abstractmethod
    def mean(self, theta, x) -> np.ndarray:
        """Expected reward g(theta, x)."""

    @abstractmethod
    def sample(self, theta: float, x: float, rng: np.random.Generator) -> float:
        ...

    @abstractmethod
    def log_likelihood(self, r, theta, x) -> np.ndarray:
        ...

    @abstractmethod
    def kl(self, theta1, x1, theta2, x2) -> np.ndarray:
        """Per-step KL(P(theta1, x1) || P(theta2, x2))."""

    @abstractmethod
    def kl_gradient(self, theta1, x1, theta2, x2) -> Pair:
        """Partial derivatives of kl with respect to (theta2, x2)."""

    @abstractmethod
    def fisher(self, theta, x) -> Triple:
        """Per-observation Fisher information entries (I_theta_theta, I_theta_x, I_x_x)."""


class LogisticGLM(RewardFamily):
    """Bernoulli rewards with logistic link of alpha*theta + beta*x."""

    name = "logistic_glm"

    def __init__(self, params: LogisticGLMParams):
        self.params = params

    @property
    def theta_box(self) -> Box:
        return self.params.theta_box

    def _linear(self, theta, x) -> np.ndarray:
        return self.params.alpha * np.asarray(theta, dtype=float) + self.params.beta * np.asarray(x, dtype=float)

    def mean(self, theta, x) -> np.ndarray:
        return expit(self._linear(theta, x))

    def sample(self, theta: float, x: float, rng: np.random.Generator) -> float:
        return float(services.glm_sample(float(self.mean(theta, x)), rng))

    def log_likelihood(self, r, theta, x) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any((r < 0.0) | (r > 1.0)):
            raise OutOfDomainError(f"Bernoulli rewards must lie in [0, 1], got {r}")
        z = self._linear(theta, x)
        return r * log_expit(z) + (1.0 - r) * log_expit(-z)

    def kl(self, theta1, x1, theta2, x2) -> np.ndarray:
        return np.asarray(services.bernoulli_kl(self.mean(theta1, x1), self.mean(theta2, x2)))

    def kl_gradient(self, theta1, x1, theta2, x2) -> Pair:
        diff = self.mean(theta2, x2) - self.mean(theta1, x1)
        return self.params.alpha * diff, self.params.beta * diff

    def fisher(self, theta, x) -> Triple:
        mu = self.mean(theta, x)
        v = mu * (1.0 - mu)
        a, b = self.params.alpha, self.params.beta
        return v * a * a, v * a * b, v * b * b


# =============================================================================
# LAPLACE AGENT CLOSED FORMS
# =============================================================================
# f(r) = exp(-|r - x| / theta) / (2 theta) on (0, 1), atoms at 0 and 1.
# Integrals over [a, b] split at the mode x = clip(x, a, b).

def _mass(a, b, x, theta) -> np.ndarray:
    """Continuous mass of (a, b)."""
    s = np.clip(x, a, b)
    left = 0.5 * (np.exp((s - x) / theta) - np.exp((a - x) / theta))
    right = 0.5 * (np.exp(-(s - x) / theta) - np.exp(-(b - x) / theta))
    return left + right


def _first_moment(a, b, c, x, theta) -> np.ndarray:
    """Integral of f(r) (r - c) over (a, b)."""
    s = np.clip(x, a, b)

    def below(r):
        return 0.5 * np.exp((r - x) / theta) * (r - c - theta)

    def above(r):
        return -0.5 * np.exp(-(r - x) / theta) * (r - c + theta)

    return (below(s) - below(a)) + (above(b) - above(s))


def _abs_moment(c, x, theta) -> np.ndarray:
    """Integral of f(r) |r - c| over (0, 1)."""
    return _first_moment(c, 1.0, c, x, theta) - _first_moment(0.0, c, c, x, theta)


def _tail_moment(k: int, length, theta) -> np.ndarray:
    """Integral of u^k exp(-u / theta) / (2 theta) over (0, length)."""
    return 0.5 * theta ** k * factorial(k) * gammainc(k + 1, length / theta)


class LaplaceAgent(RewardFamily):
    """Censored Laplace location family produced by a myopic utility-maximizing agent."""

    name = "laplace_agent"

    def __init__(self, params: LaplaceAgentParams):
        self.params = params

    @property
    def theta_box(self) -> Box:
        return self.params.theta_box

    def mean(self, theta, x) -> np.ndarray:
        return np.asarray(services.agent_mean(x, theta))

    def sample(self, theta: float, x: float, rng: np.random.Generator) -> float:
        return services.agent_sample(float(x), float(theta), rng)

    def log_likelihood(self, r, theta, x) -> np.ndarray:
        return np.asarray(services.agent_log_likelihood(r, x, theta))

    def kl(self, theta1, x1, theta2, x2) -> np.ndarray:
        theta1, x1, theta2, x2 = (np.asarray(v, dtype=float) for v in (theta1, x1, theta2, x2))
        p0 = 0.5 * np.exp(-x1 / theta1)
        p1 = 0.5 * np.exp(-(1.0 - x1) / theta1)
        atoms = p0 * (-x1 / theta1 + x2 / theta2) + p1 * (-(1.0 - x1) / theta1 + (1.0 - x2) / theta2)
        continuous = (
            (1.0 - p0 - p1) * np.log(theta2 / theta1)
            - _abs_moment(x1, x1, theta1) / theta1
            + _abs_moment(x2, x1, theta1) / theta2
        )
        return np.maximum(atoms + continuous, 0.0)

    def kl_gradient(self, theta1, x1, theta2, x2) -> Pair:
        theta1, x1, theta2, x2 = (np.asarray(v, dtype=float) for v in (theta1, x1, theta2, x2))
        p0 = 0.5 * np.exp(-x1 / theta1)
        p1 = 0.5 * np.exp(-(1.0 - x1) / theta1)
        below = _mass(0.0, x2, x1, theta1)
        above = _mass(x2, 1.0, x1, theta1)
        d_x2 = (p0 - p1 + below - above) / theta2
        d_theta2 = (
            (1.0 - p0 - p1) / theta2
            - (p0 * x2 + p1 * (1.0 - x2) + _abs_moment(x2, x1, theta1)) / theta2 ** 2
        )
        return d_theta2, d_x2

    def fisher(self, theta, x) -> Triple:
        theta = np.asarray(theta, dtype=float)
        x = np.asarray(x, dtype=float)
        p0 = 0.5 * np.exp(-x / theta)
        p1 = 0.5 * np.exp(-(1.0 - x) / theta)
        right = [_tail_moment(k, 1.0 - x, theta) for k in range(3)]
        left = [_tail_moment(k, x, theta) for k in range(3)]

        i_xx = np.ones_like(p0) / theta ** 2
        i_tx = (
            (p1 * (1.0 - x) - p0 * x) / theta ** 3
            - (right[0] - left[0]) / theta ** 2
            + (right[1] - left[1]) / theta ** 3
        )
        i_tt = (
            (p0 * x ** 2 + p1 * (1.0 - x) ** 2) / theta ** 4
            + (right[0] + left[0]) / theta ** 2
            - 2.0 * (right[1] + left[1]) / theta ** 3
            + (right[2] + left[2]) / theta ** 4
        )
        return i_tt, i_tx, i_xx
