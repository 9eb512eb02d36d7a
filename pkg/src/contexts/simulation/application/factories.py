from typing import List, Optional, Sequence

from src.shared.domain.box import Box
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.estimation.domain.value_objects import ConfidenceConfig, SearchConfig
from src.contexts.policies.domain.base import BanditPolicy
from src.contexts.policies.domain.factory import create_policy
from src.contexts.rewards.domain.families import LaplaceAgent, LogisticGLM, RewardFamily
from src.contexts.rewards.domain.value_objects import EstimateOrTruth, LaplaceAgentParams, LogisticGLMParams
from src.contexts.simulation.application.dtos import AlgorithmConfig, ArmConfig, ExperimentConfig
from src.contexts.simulation.domain.value_objects import ArmSpec


def family_from_config(arm: ArmConfig) -> RewardFamily:
    theta_box = Box.interval(arm.theta_box)
    if arm.family == "logistic_glm":
        return LogisticGLM(LogisticGLMParams(arm.alpha, arm.beta, theta_box))
    return LaplaceAgent(LaplaceAgentParams(theta_box, arm.theta_floor))


def arm_from_config(arm: ArmConfig) -> ArmSpec:
    state_box = Box.interval(arm.state_box)
    dynamics = DynamicsParams(arm.dynamics.A, arm.dynamics.B, arm.dynamics.K, state_box)
    truth = EstimateOrTruth(arm.truth.theta, arm.truth.x0)
    return ArmSpec(dynamics, family_from_config(arm), truth, arm.name)


def arms_from_config(config: ExperimentConfig) -> List[ArmSpec]:
    return [arm_from_config(arm) for arm in config.arms]


def confidence_from_config(config: ExperimentConfig) -> ConfidenceConfig:
    return ConfidenceConfig(**config.confidence.model_dump())


def search_from_config(config: ExperimentConfig) -> SearchConfig:
    return SearchConfig(**config.search.model_dump())


def policy_from_config(
    config: ExperimentConfig, algorithm: AlgorithmConfig, arms: Optional[Sequence[ArmSpec]] = None
) -> BanditPolicy:
    arms = arms if arms is not None else arms_from_config(config)
    return create_policy(
        algorithm.name,
        [arm.model for arm in arms],
        config.horizon,
        confidence_from_config(config),
        search_from_config(config),
        **algorithm.hyperparameters(),
    )
