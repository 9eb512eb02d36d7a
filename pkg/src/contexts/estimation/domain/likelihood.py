"""Trajectory likelihood and the bounded local refinement of a grid fit."""
from typing import List, Tuple

import numpy as np
from scipy import optimize

from src.contexts.dynamics.domain.services import scalar_trajectory
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.estimation.domain.value_objects import ArmHistory, MLEFit, SearchConfig
from src.contexts.rewards.domain.families import RewardFamily
from src.contexts.rewards.domain.value_objects import EstimateOrTruth


def negative_log_likelihood(
    estimate: EstimateOrTruth, history: ArmHistory, dyn: DynamicsParams, family: RewardFamily
) -> float:
    """-sum log p(r | theta, x_t) with states rolled out from x0 through the pull indicators."""
    times = history.pull_times
    if times.size == 0:
        return 0.0
    states, _ = scalar_trajectory(estimate.x0, list(history.indicators[: times[-1]]), dyn)
    return -float(np.sum(family.log_likelihood(history.rewards, estimate.theta, states[times])))


def box_bounds(dyn: DynamicsParams, family: RewardFamily) -> List[Tuple[float, float]]:
    return [family.theta_box.bounds, dyn.state_box.bounds]


def clip_point(point, bounds) -> EstimateOrTruth:
    (theta_lo, theta_hi), (x_lo, x_hi) = bounds
    return EstimateOrTruth(min(max(point[0], theta_lo), theta_hi), min(max(point[1], x_lo), x_hi))


def refine_mle(
    fit: MLEFit, history: ArmHistory, dyn: DynamicsParams, family: RewardFamily, search: SearchConfig
) -> MLEFit:
    """Bounded Nelder-Mead from a grid fit; the refined point wins only when it strictly lowers the objective."""
    if search.refine_iterations == 0:
        return fit
    n = history.n_obs
    bounds = box_bounds(dyn, family)

    def objective(point: np.ndarray) -> float:
        return negative_log_likelihood(clip_point(point, bounds), history, dyn, family) / n

    result = optimize.minimize(
        objective,
        x0=np.array([fit.estimate.theta, fit.estimate.x0]),
        method="Nelder-Mead",
        bounds=bounds,
        options={"maxiter": search.refine_iterations, "xatol": search.tolerance, "fatol": search.tolerance},
    )
    refined = clip_point(result.x, bounds)
    value = negative_log_likelihood(refined, history, dyn, family) / n
    if value < fit.objective:
        return MLEFit(refined, value, n)
    return fit
