from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List

from src.contexts.simulation.domain.value_objects import CurveSet, EpisodeResult


class ResultRepository(ABC):
    """Abstract store for benchmark result artifacts."""

    @abstractmethod
    async def save(
        self,
        out_dir: Path,
        episodes: Dict[str, List[EpisodeResult]],
        curves: Dict[str, CurveSet],
        summary: Dict[str, Any],
    ) -> List[Path]:
        """Persist per-step records, mean curves and the summary; return the written paths."""
        pass

    @abstractmethod
    async def load_episodes(self, results_dir: Path) -> Dict[str, List[EpisodeResult]]:
        """Rebuild the episodes of a results directory, grouped by algorithm."""
        pass
