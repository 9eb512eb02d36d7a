"""Scalar reward kernels for the logistic GLM and the censored-Laplace agent."""
from typing import Tuple, Union

import numpy as np
from scipy import integrate
from scipy.special import expit, xlogy

from src.shared.domain.exceptions import OutOfDomainError
from src.contexts.rewards.domain.value_objects import LogisticGLMParams


ArrayLike = Union[float, np.ndarray]

LOG_HALF = float(np.log(0.5))


def _out(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


# =============================================================================
# LOGISTIC GLM
# =============================================================================

def glm_mean(theta: ArrayLike, x: ArrayLike, params: LogisticGLMParams) -> ArrayLike:
    """Bernoulli success probability expit(alpha*theta + beta*x)."""
    return _out(expit(params.alpha * np.asarray(theta, dtype=float) + params.beta * np.asarray(x, dtype=float)))


def glm_sample(mean: float, rng: np.random.Generator) -> int:
    return int(rng.random() < mean)


def bernoulli_kl(p: ArrayLike, q: ArrayLike) -> ArrayLike:
    """KL(Bernoulli(p) || Bernoulli(q)) with 0 ln 0 = 0; +inf when q hits {0, 1} and p differs."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = xlogy(p, p) - xlogy(p, q) + xlogy(1.0 - p, 1.0 - p) - xlogy(1.0 - p, 1.0 - q)
    return _out(np.maximum(value, 0.0))


# =============================================================================
# LAPLACE AGENT
# =============================================================================

def agent_atoms(x: ArrayLike, theta: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Point masses at r = 0 and r = 1."""
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return _out(0.5 * np.exp(-x / theta)), _out(0.5 * np.exp(-(1.0 - x) / theta))


def agent_density(r: ArrayLike, x: ArrayLike, theta: ArrayLike) -> ArrayLike:
    """Continuous part of the reward law on (0, 1)."""
    r = np.asarray(r, dtype=float)
    return _out(np.exp(-np.abs(r - x) / theta) / (2.0 * np.asarray(theta, dtype=float)))


def agent_mean(x: ArrayLike, theta: ArrayLike) -> ArrayLike:
    """g(x, theta) = x + theta/2 (exp(-x/theta) - exp((x - 1)/theta))."""
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return _out(x + 0.5 * theta * (np.exp(-x / theta) - np.exp((x - 1.0) / theta)))


def agent_sample(x: float, theta: float, rng: np.random.Generator) -> float:
    """Myopic agent utility x + c with c ~ Laplace(0, theta), censored to [0, 1]."""
    c = rng.laplace(0.0, theta)
    return float(min(max(x + c, 0.0), 1.0))


def agent_log_likelihood(r: ArrayLike, x: ArrayLike, theta: ArrayLike) -> ArrayLike:
    r = np.asarray(r, dtype=float)
    if np.any((r < 0.0) | (r > 1.0)) or np.any(np.isnan(r)):
        raise OutOfDomainError(f"Agent rewards must lie in [0, 1], got {r}")
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    at_zero = LOG_HALF - x / theta
    at_one = LOG_HALF - (1.0 - x) / theta
    inside = -np.log(2.0 * theta) - np.abs(r - x) / theta
    return _out(np.where(r <= 0.0, at_zero, np.where(r >= 1.0, at_one, inside)))


def agent_kl(x1: float, theta1: float, x2: float, theta2: float) -> float:
    """KL between two agent reward laws: closed-form atoms plus adaptive quadrature on (0, 1)."""
    p0, p1 = agent_atoms(x1, theta1)
    atoms = p0 * (-x1 / theta1 + x2 / theta2) + p1 * (-(1.0 - x1) / theta1 + (1.0 - x2) / theta2)

    log_ratio = np.log(theta2 / theta1)

    def integrand(r: float) -> float:
        d1 = abs(r - x1)
        return np.exp(-d1 / theta1) / (2.0 * theta1) * (log_ratio - d1 / theta1 + abs(r - x2) / theta2)

    kinks = sorted({p for p in (x1, x2) if 0.0 < p < 1.0})
    continuous, _ = integrate.quad(
        integrand, 0.0, 1.0, points=kinks or None, epsabs=1e-12, epsrel=1e-12, limit=200
    )
    return max(float(atoms + continuous), 0.0)
