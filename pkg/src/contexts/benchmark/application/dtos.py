from typing import List, Optional

from pydantic import BaseModel, ConfigDict


class AlgorithmSummaryDto(BaseModel):
    """DTO for the final statistics of one algorithm."""

    model_config = ConfigDict(from_attributes=True)

    algorithm: str
    replicates: int
    horizon: int
    final_regret_mean: float
    final_regret_stderr: float
    final_average_reward_mean: float
    final_average_reward_stderr: float
    regret_growth_ratio: Optional[float] = None


class BenchmarkSummaryDto(BaseModel):
    """DTO for a results directory summary."""

    results_dir: str
    algorithms: List[AlgorithmSummaryDto]


class RunReportDto(BaseModel):
    """DTO returned after a benchmark run."""

    out_dir: str
    files: List[str]
    summary: BenchmarkSummaryDto
