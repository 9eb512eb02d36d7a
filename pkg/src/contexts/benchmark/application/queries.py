from pathlib import Path

from src.shared.application.query import Query


class SummarizeResultsQuery(Query):
    """Query to summarize the steps.csv of a results directory."""

    results_dir: Path
