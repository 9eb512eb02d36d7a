from pathlib import Path
from typing import Any, Dict, List

from src.shared.application.command import CommandHandler
from src.shared.application.query import QueryHandler
from src.shared.infrastructure.logger import get_logger
from src.shared.infrastructure.metrics import monitor_command, monitor_query, write_metrics
from src.contexts.simulation.application.commands import RunExperimentCommand
from src.contexts.simulation.application.handlers import ExperimentOutcome, RunExperimentCommandHandler
from src.contexts.simulation.domain.services import aggregate_curves
from src.contexts.benchmark.application.commands import PoolResultsCommand, RunBenchmarkCommand
from src.contexts.benchmark.application.queries import SummarizeResultsQuery
from src.contexts.benchmark.application.dtos import AlgorithmSummaryDto, BenchmarkSummaryDto, RunReportDto
from src.contexts.benchmark.domain.repositories import ResultRepository
from src.contexts.benchmark.domain.services import pool_episodes, summarize_curve, summarize_episodes
from src.contexts.benchmark.domain.value_objects import AlgorithmSummary


logger = get_logger(__name__)

METRICS_FILE = "metrics.prom"

ORACLE_NOTES = {
    "greedy": "oracle takes the per-step argmax of expected reward; a full-horizon optimum may collect more",
    "exact_dp": "oracle is the full-horizon optimum found by memoized search over action sequences",
}


def summary_to_dto(summary: AlgorithmSummary) -> AlgorithmSummaryDto:
    """Convert an AlgorithmSummary value object to its DTO."""
    return AlgorithmSummaryDto.model_validate(summary)


def build_summary_document(outcome: ExperimentOutcome, summaries: List[AlgorithmSummary]) -> Dict[str, Any]:
    """Content of summary.json: statistics, resolved config echo, seeds and oracle metadata."""
    config = outcome.config
    hyperparameters = {algorithm.name: algorithm.hyperparameters() for algorithm in config.algorithms}
    return {
        "algorithms": {
            summary.algorithm: {
                **summary_to_dto(summary).model_dump(exclude={"algorithm"}),
                "hyperparameters": hyperparameters[summary.algorithm],
            }
            for summary in summaries
        },
        "oracle": {
            "mode": config.oracle_mode,
            "note": ORACLE_NOTES[config.oracle_mode],
            "total_expected_reward": float(outcome.oracle_expected.sum()),
        },
        "seeds": outcome.seeds,
        "config": config.model_dump(mode="json"),
    }


class RunBenchmarkCommandHandler(CommandHandler[RunBenchmarkCommand]):
    """Handler running an experiment and persisting its artifacts."""

    def __init__(
        self,
        experiment_handler: RunExperimentCommandHandler,
        result_repository: ResultRepository,
        write_metrics_file: bool = True,
    ):
        self.experiment_handler = experiment_handler
        self.result_repository = result_repository
        self.write_metrics_file = write_metrics_file

    @monitor_command("run_benchmark")
    async def handle(self, command: RunBenchmarkCommand) -> RunReportDto:
        """Handle the run benchmark command."""
        outcome = await self.experiment_handler.handle(RunExperimentCommand(config=command.config))
        summaries = [summarize_curve(curve) for curve in outcome.curves.values()]

        out_dir = Path(command.out_dir)
        files = await self.result_repository.save(
            out_dir, outcome.episodes, outcome.curves, build_summary_document(outcome, summaries)
        )
        if self.write_metrics_file:
            metrics_path = out_dir / METRICS_FILE
            write_metrics(metrics_path)
            files.append(metrics_path)

        logger.info("benchmark_written", out_dir=str(out_dir), files=[path.name for path in files])
        return RunReportDto(
            out_dir=str(out_dir),
            files=[str(path) for path in files],
            summary=BenchmarkSummaryDto(
                results_dir=str(out_dir),
                algorithms=[summary_to_dto(summary) for summary in summaries],
            ),
        )


class SummarizeResultsQueryHandler(QueryHandler[SummarizeResultsQuery, BenchmarkSummaryDto]):
    """Handler recomputing summary statistics from a results directory."""

    def __init__(self, result_repository: ResultRepository):
        self.result_repository = result_repository

    @monitor_query("summarize_results")
    async def handle(self, query: SummarizeResultsQuery) -> BenchmarkSummaryDto:
        """Handle the summarize results query."""
        episodes = await self.result_repository.load_episodes(Path(query.results_dir))
        summaries = summarize_episodes(episodes)
        return BenchmarkSummaryDto(
            results_dir=str(query.results_dir),
            algorithms=[summary_to_dto(summary) for summary in summaries],
        )


class PoolResultsCommandHandler(CommandHandler[PoolResultsCommand]):
    """Handler pooling the episodes of several results directories, e.g. one per patient."""

    def __init__(self, result_repository: ResultRepository):
        self.result_repository = result_repository

    @monitor_command("pool_results")
    async def handle(self, command: PoolResultsCommand) -> RunReportDto:
        """Handle the pool results command."""
        groups = [await self.result_repository.load_episodes(Path(path)) for path in command.results_dirs]
        episodes = pool_episodes(groups)
        curves = {name: aggregate_curves(runs) for name, runs in episodes.items()}
        summaries = [summarize_curve(curve) for curve in curves.values()]

        out_dir = Path(command.out_dir)
        document = {
            "algorithms": {
                summary.algorithm: summary_to_dto(summary).model_dump(exclude={"algorithm"})
                for summary in summaries
            },
            "sources": [str(path) for path in command.results_dirs],
        }
        files = await self.result_repository.save(out_dir, episodes, curves, document)

        logger.info("results_pooled", out_dir=str(out_dir), sources=len(command.results_dirs), algorithms=list(curves))
        return RunReportDto(
            out_dir=str(out_dir),
            files=[str(path) for path in files],
            summary=BenchmarkSummaryDto(
                results_dir=str(out_dir),
                algorithms=[summary_to_dto(summary) for summary in summaries],
            ),
        )
