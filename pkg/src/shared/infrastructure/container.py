from dependency_injector import containers, providers

from src.shared.infrastructure.settings import get_settings
from src.contexts.simulation.application.handlers import RunExperimentCommandHandler
from src.contexts.benchmark.application.handlers import (
    PoolResultsCommandHandler,
    RunBenchmarkCommandHandler,
    SummarizeResultsQueryHandler,
)
from src.contexts.benchmark.infrastructure.repositories import CsvResultRepository


class Container(containers.DeclarativeContainer):
    """Composition root for the command-line adapter."""

    settings = providers.Singleton(get_settings)

    result_repository = providers.Singleton(CsvResultRepository)

    experiment_handler = providers.Factory(
        RunExperimentCommandHandler,
        workers=settings.provided.workers,
    )

    benchmark_handler = providers.Factory(
        RunBenchmarkCommandHandler,
        experiment_handler=experiment_handler,
        result_repository=result_repository,
        write_metrics_file=settings.provided.metrics_file,
    )

    summarize_handler = providers.Factory(
        SummarizeResultsQueryHandler,
        result_repository=result_repository,
    )

    pool_handler = providers.Factory(
        PoolResultsCommandHandler,
        result_repository=result_repository,
    )
