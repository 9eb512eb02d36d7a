import math
from typing import Optional, Sequence

from src.shared.domain.exceptions import ConfigurationError
from src.contexts.estimation.domain.value_objects import ConfidenceConfig, SearchConfig
from src.contexts.policies.domain.base import BanditPolicy
from src.contexts.policies.domain.baselines import (
    DiscountedUCBPolicy, Exp3SPolicy, RandomPolicy, SlidingWindowUCBPolicy, UCB1TunedPolicy
)
from src.contexts.policies.domain.rogue import RogueUCBPolicy, TunedRogueUCBPolicy
from src.contexts.policies.domain.value_objects import ArmModel


ALGORITHMS = ("rogue_ucb", "tuned_rogue_ucb", "ucb1_tuned", "d_ucb", "sw_ucb", "exp3s", "random")

DEFAULT_XI = 0.6


def default_discount(horizon: int) -> float:
    return 1.0 - 1.0 / (4.0 * math.sqrt(horizon))


def default_window(horizon: int) -> int:
    return max(1, math.ceil(4.0 * math.sqrt(horizon * math.log(horizon))))


def default_exp3_gamma(n_arms: int, horizon: int) -> float:
    rate = math.sqrt(n_arms * math.log(n_arms * horizon) / ((math.e - 1.0) * horizon))
    return min(1.0, rate) if rate > 0 else 1.0


def default_mixing(horizon: int) -> float:
    return 1.0 / horizon


def create_policy(
    name: str,
    models: Sequence[ArmModel],
    horizon: int,
    confidence: Optional[ConfidenceConfig] = None,
    search: Optional[SearchConfig] = None,
    gamma: Optional[float] = None,
    xi: Optional[float] = None,
    tau: Optional[int] = None,
    exp3_gamma: Optional[float] = None,
    alpha_mix: Optional[float] = None,
) -> BanditPolicy:
    """Build a fresh policy; unset hyper-parameters take their horizon-based defaults."""
    n_arms = len(models)
    xi = DEFAULT_XI if xi is None else xi
    if name == "rogue_ucb":
        return RogueUCBPolicy(models, confidence or ConfidenceConfig(), search or SearchConfig())
    if name == "tuned_rogue_ucb":
        return TunedRogueUCBPolicy(models, confidence or ConfidenceConfig(), search or SearchConfig())
    if name == "ucb1_tuned":
        return UCB1TunedPolicy(n_arms)
    if name == "d_ucb":
        return DiscountedUCBPolicy(n_arms, default_discount(horizon) if gamma is None else gamma, xi)
    if name == "sw_ucb":
        return SlidingWindowUCBPolicy(n_arms, default_window(horizon) if tau is None else tau, xi)
    if name == "exp3s":
        return Exp3SPolicy(
            n_arms,
            default_exp3_gamma(n_arms, horizon) if exp3_gamma is None else exp3_gamma,
            default_mixing(horizon) if alpha_mix is None else alpha_mix,
        )
    if name == "random":
        return RandomPolicy(n_arms)
    raise ConfigurationError(f"Unknown algorithm '{name}', expected one of {', '.join(ALGORITHMS)}")
