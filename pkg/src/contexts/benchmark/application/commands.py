from pathlib import Path
from typing import List

from pydantic import Field

from src.shared.application.command import Command
from src.contexts.simulation.application.dtos import ExperimentConfig


class RunBenchmarkCommand(Command):
    """Command to run an experiment and write its result files."""

    config: ExperimentConfig
    out_dir: Path


class PoolResultsCommand(Command):
    """Command to merge several results directories into one pooled result set."""

    results_dirs: List[Path] = Field(min_length=1)
    out_dir: Path
