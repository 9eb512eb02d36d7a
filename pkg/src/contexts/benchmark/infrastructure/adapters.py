"""Command-line adapter: `run`, `summarize` and `pool` subcommands."""
import argparse
import asyncio
from pathlib import Path
import sys
from typing import List, Optional, Sequence

from src.shared.domain.exceptions import DomainException, NotFoundError, OutOfDomainError, ValidationError
from src.shared.infrastructure.container import Container
from src.shared.infrastructure.logger import configure_logging, get_logger
from src.contexts.simulation.application.dtos import ExperimentConfig
from src.contexts.benchmark.application.commands import PoolResultsCommand, RunBenchmarkCommand
from src.contexts.benchmark.application.dtos import BenchmarkSummaryDto
from src.contexts.benchmark.application.queries import SummarizeResultsQuery
from src.contexts.benchmark.infrastructure.config_loader import apply_overrides, parse_config


logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.main",
        description="Run ROGUE bandit benchmarks and summarize their results.",
    )
    subcommands = parser.add_subparsers(dest="command", required=True)

    run = subcommands.add_parser("run", help="Run an experiment config and write CSV/JSON results")
    run.add_argument("--config", type=Path, required=True, help="Experiment JSON file")
    run.add_argument("--out", type=Path, default=None, help="Output directory (defaults to output_dir in the config)")
    run.add_argument("--seed", type=int, default=None, help="Override the base seed")
    run.add_argument("--replicates", type=int, default=None, help="Override the number of replicates")
    run.add_argument("--algorithms", type=str, default=None, help="Comma-separated subset of algorithms")

    summarize = subcommands.add_parser("summarize", help="Print final regret statistics of a results directory")
    summarize.add_argument("--dir", type=Path, required=True, dest="results_dir", help="Results directory")

    pool = subcommands.add_parser("pool", help="Merge several results directories, e.g. one per patient")
    pool.add_argument(
        "--dir", type=Path, action="append", required=True, dest="results_dirs",
        help="Results directory to pool; repeat for each source",
    )
    pool.add_argument("--out", type=Path, required=True, help="Output directory for the pooled results")
    return parser


GROWTH_NOTE = "growth = regret(T) / regret(T/2); n/a when either is not positive"


def format_summary(summary: BenchmarkSummaryDto) -> str:
    lines = [f"{'algorithm':<18}{'replicates':>11}{'T':>8}  {'final regret (mean ± se)':<28}{'growth':>8}"]
    for item in summary.algorithms:
        ratio = "n/a" if item.regret_growth_ratio is None else f"{item.regret_growth_ratio:.3f}"
        regret = f"{item.final_regret_mean:.3f} ± {item.final_regret_stderr:.3f}"
        lines.append(f"{item.algorithm:<18}{item.replicates:>11}{item.horizon:>8}  {regret:<28}{ratio:>8}")
    if any(item.regret_growth_ratio is None for item in summary.algorithms):
        lines.append(GROWTH_NOTE)
    return "\n".join(lines)


def _split_algorithms(value: Optional[str]) -> Optional[List[str]]:
    if not value:
        return None
    return [name.strip() for name in value.split(",") if name.strip()]


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    config = parse_config(args.config)
    return apply_overrides(
        config,
        seed=args.seed,
        replicates=args.replicates,
        algorithms=_split_algorithms(args.algorithms),
    )


async def run_command(container: Container, args: argparse.Namespace) -> str:
    config = _load_config(args)
    out_dir = args.out or (Path(config.output_dir) if config.output_dir else None)
    if out_dir is None:
        raise ValidationError("No output directory: pass --out or set output_dir in the config")
    handler = container.benchmark_handler()
    report = await handler.handle(RunBenchmarkCommand(config=config, out_dir=out_dir))
    return format_summary(report.summary)


async def summarize_command(container: Container, args: argparse.Namespace) -> str:
    handler = container.summarize_handler()
    summary = await handler.handle(SummarizeResultsQuery(results_dir=args.results_dir))
    return format_summary(summary)


async def pool_command(container: Container, args: argparse.Namespace) -> str:
    handler = container.pool_handler()
    report = await handler.handle(PoolResultsCommand(results_dirs=args.results_dirs, out_dir=args.out))
    return format_summary(report.summary)


COMMANDS = {"run": run_command, "summarize": summarize_command, "pool": pool_command}


def main(argv: Optional[Sequence[str]] = None, container: Optional[Container] = None) -> int:
    """Entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    container = container or Container()
    settings = container.settings()
    configure_logging(settings.log_level, settings.log_json)

    command = COMMANDS[args.command]
    try:
        output = asyncio.run(command(container, args))
    except (ValidationError, OutOfDomainError) as e:
        logger.error("invalid_input", command=args.command, error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (NotFoundError, OSError) as e:
        logger.error("io_failure", command=args.command, error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except DomainException as e:
        logger.error("command_failed", command=args.command, error=str(e), error_type=type(e).__name__)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE

    print(output)
    return EXIT_OK
