"""Confidence radii: concentration constants and the data-driven alternative."""
import math

import numpy as np

from src.shared.domain.exceptions import OutOfDomainError
from src.contexts.estimation.domain.value_objects import ConfidenceConfig


def c_f(cfg: ConfidenceConfig) -> float:
    d = cfg.d_x + cfg.d_theta
    first = 8.0 * cfg.lipschitz_f * cfg.diam_x * math.sqrt(math.pi)
    second = 48.0 * math.sqrt(2.0) * 2.0 ** (1.0 / d) * cfg.lipschitz_f * cfg.diam_xtheta * math.sqrt(math.pi * d)
    return first + second


def _b_from_log(log_inv_alpha: float, cfg: ConfidenceConfig) -> float:
    return c_f(cfg) / math.sqrt(log_inv_alpha) + cfg.lipschitz_p * cfg.sigma * math.sqrt(2.0)


def radius_B(alpha: float, cfg: ConfidenceConfig) -> float:
    """B(alpha) = c_f / sqrt(ln(1/alpha)) + L_p sigma sqrt(2)."""
    if not 0.0 < alpha < 1.0:
        raise OutOfDomainError(f"alpha must lie in (0, 1), got {alpha}")
    return _b_from_log(math.log(1.0 / alpha), cfg)


def radius_A(t: float, cfg: ConfidenceConfig) -> float:
    """A(t) = B(t^-4), with ln(1/alpha) = 4 ln t evaluated directly."""
    if t < 2:
        raise OutOfDomainError(f"radius_A needs t >= 2, got {t}")
    return _b_from_log(4.0 * math.log(t), cfg)


def theoretical_radius(t: float, n_obs: int, cfg: ConfidenceConfig) -> float:
    """Bound on the average trajectory divergence: A(t) sqrt(4 ln t / n)."""
    return radius_A(t, cfg) * math.sqrt(4.0 * math.log(t) / n_obs)


def tuned_radius(variance, eta: float, t: float, n_obs: int) -> np.ndarray:
    """sqrt(min(eta / 4, S) ln t / n); broadcasts over per-candidate variances."""
    if t < 2:
        raise OutOfDomainError(f"tuned_radius needs t >= 2, got {t}")
    return np.sqrt(np.minimum(eta / 4.0, np.asarray(variance, dtype=float)) * math.log(t) / n_obs)
