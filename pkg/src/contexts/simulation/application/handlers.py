import asyncio
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
import time
from typing import Dict, List, Tuple

import numpy as np

from src.shared.application.command import CommandHandler
from src.shared.infrastructure.logger import get_logger
from src.shared.infrastructure.metrics import monitor_command, record_episode
from src.contexts.simulation.application.commands import RunExperimentCommand
from src.contexts.simulation.application.dtos import ExperimentConfig
from src.contexts.simulation.application.factories import arms_from_config, policy_from_config
from src.contexts.simulation.domain.services import (
    aggregate_curves, expected_reward_path, oracle_actions, run_episode
)
from src.contexts.simulation.domain.value_objects import CurveSet, EpisodeResult


logger = get_logger(__name__)


class ExperimentOutcome:
    """Episodes and aggregated curves per algorithm, in config order."""

    def __init__(
        self,
        config: ExperimentConfig,
        episodes: Dict[str, List[EpisodeResult]],
        curves: Dict[str, CurveSet],
        oracle_expected: np.ndarray,
    ):
        self.config = config
        self.episodes = episodes
        self.curves = curves
        self.oracle_expected = oracle_expected

    @property
    def seeds(self) -> Dict[str, List[List[int]]]:
        return {name: [episode.seed for episode in runs] for name, runs in self.episodes.items()}


def replicate_seed(base_seed: int, replicate: int, algorithm_index: int) -> List[int]:
    return [base_seed + replicate, algorithm_index]


def run_replicate(
    config: ExperimentConfig, algorithm_index: int, replicate: int, oracle_expected: np.ndarray
) -> Tuple[EpisodeResult, float]:
    """One isolated work unit; top-level so process pools can pickle it."""
    start = time.perf_counter()
    algorithm = config.algorithms[algorithm_index]
    arms = arms_from_config(config)
    policy = policy_from_config(config, algorithm, arms)
    result = run_episode(
        policy,
        arms,
        config.horizon,
        replicate_seed(config.seed, replicate, algorithm_index),
        oracle_mode=config.oracle_mode,
        oracle_expected=oracle_expected,
        algorithm=algorithm.name,
        replicate=replicate,
    )
    return result, time.perf_counter() - start


class RunExperimentCommandHandler(CommandHandler[RunExperimentCommand]):
    """Handler fanning replicates out to a worker pool."""

    def __init__(self, workers: int = 1):
        self.workers = max(1, int(workers))

    def _executor(self) -> Executor:
        if self.workers == 1:
            return ThreadPoolExecutor(max_workers=1)
        return ProcessPoolExecutor(max_workers=self.workers)

    @monitor_command("run_experiment")
    async def handle(self, command: RunExperimentCommand) -> ExperimentOutcome:
        """Handle the run experiment command."""
        config = command.config
        arms = arms_from_config(config)
        oracle = expected_reward_path(
            arms, oracle_actions(arms, config.horizon, config.oracle_mode, config.oracle_budget)
        )
        jobs = [(a, r) for a in range(len(config.algorithms)) for r in range(config.replicates)]
        logger.info(
            "experiment_started",
            algorithms=config.algorithm_names,
            replicates=config.replicates,
            horizon=config.horizon,
            workers=self.workers,
        )

        loop = asyncio.get_running_loop()
        with self._executor() as executor:
            futures = [
                loop.run_in_executor(executor, run_replicate, config, a, r, oracle)
                for a, r in jobs
            ]
            try:
                outputs = await asyncio.gather(*futures)
            except Exception as e:
                logger.error("experiment_failed", error=str(e), error_type=type(e).__name__)
                for name in config.algorithm_names:
                    record_episode(name, "error")
                raise

        episodes: Dict[str, List[EpisodeResult]] = {name: [] for name in config.algorithm_names}
        for result, elapsed in outputs:
            record_episode(result.algorithm, "success", elapsed, result.horizon)
            episodes[result.algorithm].append(result)

        curves = {name: aggregate_curves(runs) for name, runs in episodes.items()}
        for name, curve in curves.items():
            logger.info(
                "algorithm_finished",
                algorithm=name,
                final_regret=round(curve.final_regret, 4),
                stderr=round(curve.final_regret_stderr, 4),
            )
        return ExperimentOutcome(config, episodes, curves, oracle)
