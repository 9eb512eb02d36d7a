from src.shared.domain.base_value_object import BaseValueObject
from src.shared.domain.exceptions import ConfigurationError
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.rewards.domain.families import RewardFamily


class ArmModel(BaseValueObject):
    """What a learner knows about an arm: its dynamics and its reward family, not (theta, x0)."""

    def __init__(self, dynamics: DynamicsParams, family: RewardFamily):
        if not dynamics.is_scalar:
            raise ConfigurationError("Reward families take one-dimensional states")
        self.dynamics = dynamics
        self.family = family
