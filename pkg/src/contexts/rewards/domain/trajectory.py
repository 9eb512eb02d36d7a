"""Trajectory-level divergences: per-step quantities summed over an arm's pull times.

Pull times are 0-based step indices; the state at pull time s is the
rollout of x0 over indicators[:s].
"""
from typing import Iterable, Sequence, Tuple

import numpy as np

from src.shared.domain.exceptions import ConfigurationError
from src.contexts.dynamics.domain.services import scalar_trajectory
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.rewards.domain.families import RewardFamily
from src.contexts.rewards.domain.value_objects import EstimateOrTruth


def _sorted_times(action_times: Iterable[int], indicators: Sequence[int]) -> np.ndarray:
    times = np.array(sorted({int(t) for t in action_times}), dtype=int)
    if times.size and (times[0] < 0 or times[-1] > len(indicators)):
        raise ConfigurationError(
            f"Action times must lie in [0, {len(indicators)}], got range [{times[0]}, {times[-1]}]"
        )
    return times


def pull_states(
    estimate: EstimateOrTruth, times: np.ndarray, indicators: Sequence[int], dyn: DynamicsParams
) -> Tuple[np.ndarray, np.ndarray]:
    """States and d x / d x0 of the estimate at the given pull times."""
    if times.size == 0:
        return np.empty(0), np.empty(0)
    states, derivs = scalar_trajectory(estimate.x0, list(indicators[: times[-1]]), dyn)
    return states[times], derivs[times]


def trajectory_kl(
    truth: EstimateOrTruth,
    candidate: EstimateOrTruth,
    action_times: Iterable[int],
    indicators: Sequence[int],
    dyn: DynamicsParams,
    family: RewardFamily,
) -> float:
    """Sum over pull times of KL(P(truth) || P(candidate)), both rolled through the same indicators."""
    times = _sorted_times(action_times, indicators)
    if times.size == 0:
        return 0.0
    x_truth, _ = pull_states(truth, times, indicators, dyn)
    x_cand, _ = pull_states(candidate, times, indicators, dyn)
    return float(np.sum(family.kl(truth.theta, x_truth, candidate.theta, x_cand)))


def trajectory_kl_gradient(
    truth: EstimateOrTruth,
    candidate: EstimateOrTruth,
    action_times: Iterable[int],
    indicators: Sequence[int],
    dyn: DynamicsParams,
    family: RewardFamily,
) -> np.ndarray:
    """Gradient of trajectory_kl with respect to the candidate (theta, x0)."""
    times = _sorted_times(action_times, indicators)
    if times.size == 0:
        return np.zeros(2)
    x_truth, _ = pull_states(truth, times, indicators, dyn)
    x_cand, d_cand = pull_states(candidate, times, indicators, dyn)
    d_theta, d_x = family.kl_gradient(truth.theta, x_truth, candidate.theta, x_cand)
    return np.array([np.sum(d_theta), np.sum(d_x * d_cand)])


def fisher_info(
    candidate: EstimateOrTruth,
    action_times: Iterable[int],
    indicators: Sequence[int],
    dyn: DynamicsParams,
    family: RewardFamily,
) -> np.ndarray:
    """Fisher information of (theta, x0) accumulated over the pull times."""
    times = _sorted_times(action_times, indicators)
    if times.size == 0:
        return np.zeros((2, 2))
    x, d = pull_states(candidate, times, indicators, dyn)
    i_tt, i_tx, i_xx = family.fisher(candidate.theta, x)
    cross = float(np.sum(i_tx * d))
    return np.array([
        [float(np.sum(i_tt)), cross],
        [cross, float(np.sum(i_xx * d * d))],
    ])
