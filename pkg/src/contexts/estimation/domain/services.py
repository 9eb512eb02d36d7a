from typing import Callable, Optional, Union

import numpy as np
from scipy import optimize

from src.shared.domain.exceptions import EstimationError
from src.contexts.dynamics.domain.services import scalar_trajectory
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.estimation.domain.estimator import ArmEstimator
from src.contexts.estimation.domain.likelihood import box_bounds, clip_point, negative_log_likelihood, refine_mle
from src.contexts.estimation.domain.value_objects import ArmHistory, MLEFit, SearchConfig
from src.contexts.rewards.domain.families import RewardFamily
from src.contexts.rewards.domain.trajectory import fisher_info, trajectory_kl, trajectory_kl_gradient
from src.contexts.rewards.domain.value_objects import EstimateOrTruth


def fit_mle(history: ArmHistory, dyn: DynamicsParams, family: RewardFamily, search: SearchConfig) -> MLEFit:
    """Grid maximum likelihood over Theta x X followed by bounded Nelder-Mead refinement.

    The refined point replaces the grid optimum only when it strictly lowers the objective.
    """
    if history.n_obs == 0:
        raise EstimationError("Cannot fit an arm without observations; pull every arm once first")
    fit, _ = ArmEstimator.from_history(history, dyn, family, search).grid_fit()
    return refine_mle(fit, history, dyn, family, search)


def tuned_variance(
    fit: MLEFit, candidate: EstimateOrTruth, history: ArmHistory, dyn: DynamicsParams, family: RewardFamily
) -> float:
    """Delta-method variance of the average trajectory divergence of candidate to the fit."""
    n = history.n_obs
    if n == 0:
        return 0.0
    times = history.pull_times
    gradient = trajectory_kl_gradient(candidate, fit.estimate, times, history.indicators, dyn, family)
    information = fisher_info(fit.estimate, times, history.indicators, dyn, family)
    value = float(gradient @ np.linalg.pinv(information) @ gradient) / n ** 2
    return max(value, 0.0)


RadiusRule = Union[float, Callable[[EstimateOrTruth], float]]


def refine_ucb(
    fit: MLEFit,
    radius: RadiusRule,
    history: ArmHistory,
    dyn: DynamicsParams,
    family: RewardFamily,
    search: SearchConfig,
    start: EstimateOrTruth,
) -> Optional[float]:
    """Bounded Nelder-Mead search for a larger feasible current mean, starting from a grid point.

    radius is a constant or a function of the candidate. Infeasible points
    score above every attainable objective. Returns the mean at the end
    point when it is feasible, else None.
    """
    n = history.n_obs
    times = history.pull_times
    indicators = list(history.indicators)
    bounds = box_bounds(dyn, family)
    radius_of = radius if callable(radius) else (lambda _: radius)

    def evaluate(point: np.ndarray):
        candidate = clip_point(point, bounds)
        divergence = trajectory_kl(candidate, fit.estimate, times, indicators, dyn, family) / n
        state = scalar_trajectory(candidate.x0, indicators, dyn)[0][-1]
        return divergence - float(radius_of(candidate)), float(family.mean(candidate.theta, state))

    def objective(point: np.ndarray) -> float:
        excess, mean = evaluate(point)
        if excess <= 0.0:
            return -mean
        return 1.0 + excess

    result = optimize.minimize(
        objective,
        x0=np.array([start.theta, start.x0]),
        method="Nelder-Mead",
        bounds=bounds,
        options={"maxiter": search.refine_iterations, "xatol": search.tolerance, "fatol": search.tolerance},
    )
    excess, mean = evaluate(result.x)
    return mean if excess <= 0.0 else None


def ucb_reward(
    fit: MLEFit,
    radius: float,
    history: ArmHistory,
    dyn: DynamicsParams,
    family: RewardFamily,
    search: SearchConfig,
) -> float:
    """Largest current mean reward over (theta, x0) whose average divergence to the fit is within radius.

    The current step is the end of the history. Grid search with feasibility
    filtering, then refine_ucb from the best feasible grid point.
    """
    if history.n_obs == 0:
        raise EstimationError("Cannot bound an arm without observations")

    estimator = ArmEstimator.from_history(history, dyn, family, search)
    feasible = estimator.region_terms(fit).average_divergence <= radius
    best, cell = estimator.best_feasible(feasible)

    value = max(best, estimator.current_mean(fit.estimate))
    if search.refine_iterations == 0:
        return value

    start = cell if cell is not None else fit.estimate
    refined = refine_ucb(fit, radius, history, dyn, family, search, start)
    if refined is not None and refined > value:
        value = refined
    return float(value)
