import math

from src.shared.domain.base_value_object import BaseValueObject
from src.shared.domain.box import Box
from src.shared.domain.exceptions import ConfigurationError


DEFAULT_THETA_FLOOR = 0.05


class LogisticGLMParams(BaseValueObject):
    """Static weights of the Bernoulli-logistic reward family."""

    def __init__(self, alpha: float, beta: float, theta_box: Box):
        if not (math.isfinite(alpha) and math.isfinite(beta)):
            raise ConfigurationError(f"GLM weights must be finite, got alpha={alpha}, beta={beta}")
        if theta_box.dim != 1:
            raise ConfigurationError("The logistic reward family takes a scalar theta")
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.theta_box = theta_box


class LaplaceAgentParams(BaseValueObject):
    """Censored-Laplace agent family; theta is the Laplace scale and must stay positive."""

    def __init__(self, theta_box: Box = None, theta_floor: float = DEFAULT_THETA_FLOOR):
        if theta_box is None:
            if not theta_floor > 0:
                raise ConfigurationError(f"theta_floor must be positive, got {theta_floor}")
            theta_box = Box(theta_floor, 1.0)
        if theta_box.dim != 1:
            raise ConfigurationError("The Laplace agent family takes a scalar theta")
        lower, _ = theta_box.bounds
        if not lower > 0:
            raise ConfigurationError(f"Laplace scale box must start above 0, got lower bound {lower}")
        self.theta_box = theta_box


class EstimateOrTruth(BaseValueObject):
    """A (theta, x0) pair: ground truth for a simulated arm or an estimate of it."""

    def __init__(self, theta: float, x0: float):
        if not (math.isfinite(theta) and math.isfinite(x0)):
            raise ConfigurationError(f"theta and x0 must be finite, got theta={theta}, x0={x0}")
        self.theta = float(theta)
        self.x0 = float(x0)

    def check_within(self, theta_box: Box, state_box: Box) -> "EstimateOrTruth":
        if not theta_box.contains(self.theta):
            lower, upper = theta_box.bounds
            raise ConfigurationError(f"theta={self.theta} lies outside [{lower}, {upper}]")
        if not state_box.contains(self.x0):
            lower, upper = state_box.bounds
            raise ConfigurationError(f"x0={self.x0} lies outside [{lower}, {upper}]")
        return self
