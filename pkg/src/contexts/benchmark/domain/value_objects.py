from typing import Optional

from src.shared.domain.base_value_object import BaseValueObject
from src.shared.domain.exceptions import ValidationError


class AlgorithmSummary(BaseValueObject):
    """Final statistics of one algorithm across its replicates."""

    def __init__(
        self,
        algorithm: str,
        replicates: int,
        horizon: int,
        final_regret_mean: float,
        final_regret_stderr: float,
        final_average_reward_mean: float,
        final_average_reward_stderr: float,
        regret_growth_ratio: Optional[float],
    ):
        if replicates < 1:
            raise ValidationError(f"Summary needs at least one replicate, got {replicates}")
        self.algorithm = algorithm
        self.replicates = int(replicates)
        self.horizon = int(horizon)
        self.final_regret_mean = float(final_regret_mean)
        self.final_regret_stderr = float(final_regret_stderr)
        self.final_average_reward_mean = float(final_average_reward_mean)
        self.final_average_reward_stderr = float(final_average_reward_stderr)
        self.regret_growth_ratio = regret_growth_ratio
