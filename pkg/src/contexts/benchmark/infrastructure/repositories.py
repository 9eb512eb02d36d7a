import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Tuple

import numpy as np

from src.shared.domain.exceptions import NotFoundError, ValidationError
from src.shared.infrastructure.logger import get_logger
from src.contexts.simulation.domain.value_objects import CurveSet, EpisodeResult
from src.contexts.benchmark.domain.repositories import ResultRepository


logger = get_logger(__name__)

STEPS_FILE = "steps.csv"
CURVES_FILE = "curves.csv"
SUMMARY_FILE = "summary.json"

STEP_COLUMNS = (
    "algorithm", "replicate", "t", "action", "reward", "expected_reward",
    "oracle_expected_reward", "cumulative_regret", "avg_reward",
)
CURVE_COLUMNS = (
    "algorithm", "t", "mean_regret", "stderr_regret", "mean_avg_reward", "stderr_avg_reward",
)


def _num(value: float) -> str:
    return repr(float(value))


def _write_csv(path: Path, header: Iterable[str], rows: Iterable[Iterable[str]]) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _step_rows(episodes: Dict[str, List[EpisodeResult]]) -> Iterable[List[str]]:
    for name, runs in episodes.items():
        for episode in runs:
            regret = episode.cumulative_regret
            average = episode.average_reward
            for s in range(episode.horizon):
                yield [
                    name,
                    str(episode.replicate),
                    str(s + 1),
                    str(int(episode.actions[s])),
                    _num(episode.rewards[s]),
                    _num(episode.expected[s]),
                    _num(episode.oracle_expected[s]),
                    _num(regret[s]),
                    _num(average[s]),
                ]


def _curve_rows(curves: Dict[str, CurveSet]) -> Iterable[List[str]]:
    for name, curve in curves.items():
        for s in range(curve.horizon):
            yield [
                name,
                str(s + 1),
                _num(curve.mean_regret[s]),
                _num(curve.stderr_regret[s]),
                _num(curve.mean_average_reward[s]),
                _num(curve.stderr_average_reward[s]),
            ]


class CsvResultRepository(ResultRepository):
    """Results as UTF-8 CSV ('\\n' line endings, shortest round-trip floats) plus a JSON summary."""

    async def save(
        self,
        out_dir: Path,
        episodes: Dict[str, List[EpisodeResult]],
        curves: Dict[str, CurveSet],
        summary: Dict[str, Any],
    ) -> List[Path]:
        """Persist per-step records, mean curves and the summary; return the written paths."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)

        steps_path = out_dir / STEPS_FILE
        curves_path = out_dir / CURVES_FILE
        summary_path = out_dir / SUMMARY_FILE
        _write_csv(steps_path, STEP_COLUMNS, _step_rows(episodes))
        _write_csv(curves_path, CURVE_COLUMNS, _curve_rows(curves))
        summary_path.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")

        logger.info(
            "results_saved",
            out_dir=str(out_dir),
            episodes=sum(len(runs) for runs in episodes.values()),
        )
        return [steps_path, curves_path, summary_path]

    async def load_episodes(self, results_dir: Path) -> Dict[str, List[EpisodeResult]]:
        """Rebuild the episodes of a results directory, grouped by algorithm."""
        results_dir = Path(results_dir)
        if not results_dir.is_dir():
            raise NotFoundError(f"Results directory {results_dir} does not exist")
        steps_path = results_dir / STEPS_FILE
        if not steps_path.is_file():
            raise NotFoundError(f"No {STEPS_FILE} in {results_dir}")

        groups: Dict[Tuple[str, int], List[Dict[str, str]]] = {}
        with steps_path.open(newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if tuple(reader.fieldnames or ()) != STEP_COLUMNS:
                raise ValidationError(
                    f"{steps_path} has columns {reader.fieldnames}, expected {list(STEP_COLUMNS)}"
                )
            for row in reader:
                groups.setdefault((row["algorithm"], int(row["replicate"])), []).append(row)
        if not groups:
            raise ValidationError(f"{steps_path} holds no step records")

        episodes: Dict[str, List[EpisodeResult]] = {}
        for (name, replicate), rows in groups.items():
            steps = [int(row["t"]) for row in rows]
            if steps != list(range(1, len(rows) + 1)):
                raise ValidationError(f"Steps of {name} replicate {replicate} are not 1..{len(rows)}")
            episodes.setdefault(name, []).append(EpisodeResult(
                algorithm=name,
                replicate=replicate,
                seed=[],
                actions=np.array([int(row["action"]) for row in rows]),
                rewards=np.array([float(row["reward"]) for row in rows]),
                expected=np.array([float(row["expected_reward"]) for row in rows]),
                oracle_expected=np.array([float(row["oracle_expected_reward"]) for row in rows]),
            ))

        logger.debug("results_loaded", results_dir=str(results_dir), algorithms=list(episodes))
        return episodes
