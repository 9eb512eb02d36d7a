from src.shared.application.command import Command
from src.contexts.simulation.application.dtos import ExperimentConfig


class RunExperimentCommand(Command):
    """Command to run every (algorithm, replicate) episode of an experiment."""

    config: ExperimentConfig
