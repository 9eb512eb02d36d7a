from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from src.shared.domain.exceptions import ValidationError
from src.contexts.simulation.domain.services import aggregate_curves
from src.contexts.simulation.domain.value_objects import CurveSet, EpisodeResult
from src.contexts.benchmark.domain.value_objects import AlgorithmSummary


def regret_growth_ratio(mean_regret: np.ndarray) -> Optional[float]:
    """regret(T) / regret(floor(T/2)); None when either end is not positive.

    Logarithmic regret gives a ratio near 1, linear regret a ratio near 2.
    Regret measured against a heuristic oracle can go negative, where the
    ratio has no growth reading.
    """
    mean_regret = np.asarray(mean_regret, dtype=float)
    half = mean_regret.size // 2
    if half == 0:
        return None
    denominator = mean_regret[half - 1]
    if denominator <= 0.0 or mean_regret[-1] <= 0.0:
        return None
    return float(mean_regret[-1] / denominator)


def summarize_curve(curve: CurveSet) -> AlgorithmSummary:
    return AlgorithmSummary(
        algorithm=curve.algorithm,
        replicates=curve.replicates,
        horizon=curve.horizon,
        final_regret_mean=curve.final_regret,
        final_regret_stderr=curve.final_regret_stderr,
        final_average_reward_mean=float(curve.mean_average_reward[-1]),
        final_average_reward_stderr=float(curve.stderr_average_reward[-1]),
        regret_growth_ratio=regret_growth_ratio(curve.mean_regret),
    )


def summarize_episodes(episodes: Dict[str, Sequence[EpisodeResult]]) -> List[AlgorithmSummary]:
    """One summary per algorithm, preserving the mapping's order."""
    if not episodes:
        raise ValidationError("No episodes to summarize")
    return [summarize_curve(aggregate_curves(runs)) for runs in episodes.values()]


def pool_episodes(groups: Sequence[Mapping[str, Sequence[EpisodeResult]]]) -> Dict[str, List[EpisodeResult]]:
    """Merge the episodes of several result sets, e.g. one per simulated patient.

    Only algorithms present in every set are kept. Replicates are renumbered
    0..n-1 in set order so the pooled records stay unique.
    """
    if not groups:
        raise ValidationError("No result sets to pool")
    common = [name for name in groups[0] if all(name in group for group in groups[1:])]
    if not common:
        raise ValidationError("No algorithm is present in every result set")

    pooled: Dict[str, List[EpisodeResult]] = {}
    for name in common:
        runs = [episode for group in groups for episode in group[name]]
        horizons = sorted({episode.horizon for episode in runs})
        if len(horizons) != 1:
            raise ValidationError(f"Cannot pool {name} episodes with horizons {horizons}")
        pooled[name] = [
            EpisodeResult(
                algorithm=name,
                replicate=index,
                seed=episode.seed,
                actions=episode.actions,
                rewards=episode.rewards,
                expected=episode.expected,
                oracle_expected=episode.oracle_expected,
            )
            for index, episode in enumerate(runs)
        ]
    return pooled
