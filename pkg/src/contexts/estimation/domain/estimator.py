"""Incremental grid estimator for one arm.

The estimator tracks every x0 grid point's current state and derivative
d x / d x0, accumulates the grid log-likelihood as rewards arrive, and
remembers the grid state vector seen at each pull. Pull times with identical
grid states (common once the projection saturates) share one group, so
divergence sums cost O(groups x grid) instead of O(pulls x grid).
"""
from typing import List, Optional, Tuple

import numpy as np

from src.shared.domain.exceptions import ConfigurationError, EstimationError
from src.contexts.dynamics.domain.services import scalar_trajectory
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.estimation.domain.likelihood import refine_mle
from src.contexts.estimation.domain.value_objects import ArmHistory, MLEFit, SearchConfig
from src.contexts.rewards.domain.families import RewardFamily
from src.contexts.rewards.domain.value_objects import EstimateOrTruth


class RegionTerms:
    """Divergence of every grid point to a fixed fit, plus the pieces of the data-driven radius."""

    def __init__(
        self,
        fit: MLEFit,
        divergence: np.ndarray,
        gradient: Optional[np.ndarray],
        fisher: np.ndarray,
        max_step_kl: float,
    ):
        self.fit = fit
        self.divergence = divergence
        self.gradient = gradient
        self.fisher = fisher
        self.max_step_kl = max_step_kl
        self._variance = None

    @property
    def n_obs(self) -> int:
        return self.fit.n_obs

    @property
    def average_divergence(self) -> np.ndarray:
        return self.divergence / self.n_obs

    def variance(self) -> np.ndarray:
        """Delta-method variance (1/n^2) grad' pinv(I) grad at every grid point."""
        if self.gradient is None:
            raise EstimationError("Region terms were computed without divergence gradients")
        if self._variance is None:
            pinv = np.linalg.pinv(self.fisher)
            quad = np.einsum('...i,ij,...j->...', self.gradient, pinv, self.gradient)
            self._variance = np.maximum(quad, 0.0) / self.n_obs ** 2
        return self._variance


class ArmEstimator:
    """Grid likelihood and confidence-region bookkeeping for one arm."""

    def __init__(self, dynamics: DynamicsParams, family: RewardFamily, search: SearchConfig):
        if not dynamics.is_scalar:
            raise ConfigurationError("Estimation supports one-dimensional states only")
        self.dynamics = dynamics
        self.family = family
        self.search = search
        self.thetas = family.theta_box.grid(search.theta_points)
        self.x0_grid = dynamics.state_box.grid(search.state_points)

        self._coefficients = dynamics.scalar_coefficients
        self._states = self.x0_grid.copy()
        self._derivs = np.ones_like(self._states)
        self._loglik = np.zeros((self.thetas.size, self.x0_grid.size))
        self._indicators: List[int] = []
        self._rewards: List[float] = []

        self._pull_groups: List[int] = []
        self._group_lookup = {}
        self._group_states: List[np.ndarray] = []
        self._group_derivs: List[np.ndarray] = []
        self._group_counts: List[int] = []

        self._region: Optional[RegionTerms] = None
        self._fit_index: Optional[Tuple[int, int]] = None
        self._fresh_pulls = 0

    @classmethod
    def from_history(
        cls, history: ArmHistory, dynamics: DynamicsParams, family: RewardFamily, search: SearchConfig
    ) -> "ArmEstimator":
        estimator = cls(dynamics, family, search)
        rewards = iter(history.rewards)
        for chosen in history.indicators:
            if chosen:
                estimator.record(next(rewards))
            estimator.advance(int(chosen))
        return estimator

    @property
    def n_obs(self) -> int:
        return len(self._rewards)

    @property
    def steps(self) -> int:
        return len(self._indicators)

    @property
    def current_states(self) -> np.ndarray:
        return self._states

    @property
    def log_likelihood(self) -> np.ndarray:
        """Grid log-likelihood, rows indexed by theta and columns by x0."""
        return self._loglik

    @property
    def fit_index(self) -> Optional[Tuple[int, int]]:
        return self._fit_index

    def history(self) -> ArmHistory:
        return ArmHistory(self._indicators, self._rewards)

    def record(self, reward: float) -> None:
        """Register a reward observed at the current states; call before advance(1)."""
        self._loglik += self.family.log_likelihood(reward, self.thetas[:, None], self._states[None, :])

        key = self._states.tobytes() + self._derivs.tobytes()
        group = self._group_lookup.get(key)
        if group is None:
            group = len(self._group_counts)
            self._group_lookup[key] = group
            self._group_states.append(self._states.copy())
            self._group_derivs.append(self._derivs.copy())
            self._group_counts.append(0)
        self._group_counts[group] += 1
        self._pull_groups.append(group)
        self._rewards.append(float(reward))
        self._fresh_pulls += 1

    def advance(self, chosen: int) -> None:
        a, b, k, lower, upper = self._coefficients
        pre = a * self._states + (b * chosen + k)
        inside = (pre >= lower) & (pre <= upper)
        self._states = np.clip(pre, lower, upper)
        self._derivs = np.where(inside, a * self._derivs, 0.0)
        self._indicators.append(int(chosen))

    def grid_fit(self) -> Tuple[MLEFit, Tuple[int, int]]:
        """Grid maximum-likelihood point; ties go to the smallest (theta, x0)."""
        if self.n_obs == 0:
            raise EstimationError("Cannot fit an arm without observations; pull every arm once first")
        i, j = np.unravel_index(int(np.argmax(self._loglik)), self._loglik.shape)
        estimate = EstimateOrTruth(self.thetas[i], self.x0_grid[j])
        fit = MLEFit(estimate, -float(self._loglik[i, j]) / self.n_obs, self.n_obs)
        return fit, (int(i), int(j))

    def region_terms(
        self, fit: MLEFit, fit_index: Optional[Tuple[int, int]] = None, with_gradient: bool = False
    ) -> RegionTerms:
        """Divergence D(grid point || fit) over the whole grid.

        With fit_index the fit is a grid point and its states come from the
        stored groups; otherwise its trajectory is rolled out explicitly.
        """
        if fit_index is not None:
            column = fit_index[1]
            states = np.array(self._group_states)
            derivs = np.array(self._group_derivs)
            counts = np.array(self._group_counts, dtype=float)
            fit_x, fit_d = states[:, column], derivs[:, column]
        else:
            states, counts, fit_x, fit_d = self._groups_for(fit.estimate)
        return self._accumulate(fit, states, counts, fit_x, fit_d, with_gradient)

    def snapshot(self, with_gradient: bool = False) -> RegionTerms:
        """Cached fit and region, recomputed every refit_every observations.

        The fit is the grid optimum, refined by bounded Nelder-Mead when
        search.refine_iterations > 0; fit_index is None once refinement moves it.
        """
        stale = (
            self._region is None
            or self._fresh_pulls >= self.search.refit_every
            or (with_gradient and self._region.gradient is None)
        )
        if stale:
            fit, index = self.grid_fit()
            refined = refine_mle(fit, self.history(), self.dynamics, self.family, self.search)
            if refined is not fit:
                fit, index = refined, None
            self._region = self.region_terms(fit, index, with_gradient)
            self._fit_index = index
            self._fresh_pulls = 0
        return self._region

    def mean_grid(self) -> np.ndarray:
        """g(theta, x_t(x0)) at the current step for every grid point."""
        return self.family.mean(self.thetas[:, None], self._states[None, :])

    def best_feasible(self, feasible: np.ndarray) -> Tuple[float, Optional[EstimateOrTruth]]:
        """Largest current mean over feasible grid points and the point reaching it (None if none is)."""
        masked = np.where(feasible, self.mean_grid(), -np.inf)
        flat = int(np.argmax(masked))
        best = float(masked.flat[flat])
        if not np.isfinite(best):
            return best, None
        i, j = np.unravel_index(flat, masked.shape)
        return best, EstimateOrTruth(self.thetas[i], self.x0_grid[j])

    def current_mean(self, estimate: EstimateOrTruth) -> float:
        """g(theta, x_t) for one (theta, x0), rolled out through this arm's indicators."""
        state = scalar_trajectory(estimate.x0, self._indicators, self.dynamics)[0][-1]
        return float(self.family.mean(estimate.theta, state))

    def _groups_for(self, estimate: EstimateOrTruth):
        states, derivs = scalar_trajectory(estimate.x0, self._indicators, self.dynamics)
        pull_times = np.flatnonzero(np.asarray(self._indicators, dtype=np.int64))
        lookup = {}
        rows, counts, fit_x, fit_d = [], [], [], []
        for group, step in zip(self._pull_groups, pull_times):
            key = (group, states[step], derivs[step])
            slot = lookup.get(key)
            if slot is None:
                lookup[key] = len(counts)
                rows.append(self._group_states[group])
                counts.append(1.0)
                fit_x.append(states[step])
                fit_d.append(derivs[step])
            else:
                counts[slot] += 1.0
        return np.array(rows), np.array(counts), np.array(fit_x), np.array(fit_d)

    def _accumulate(self, fit, states, counts, fit_x, fit_d, with_gradient) -> RegionTerms:
        shape = self._loglik.shape
        theta_fit = fit.estimate.theta
        theta_col = self.thetas[None, :, None]
        divergence = np.zeros(shape)
        gradient = np.zeros(shape + (2,)) if with_gradient else None
        max_step_kl = 0.0

        block = max(1, self.search.chunk_elements // (shape[0] * shape[1]))
        for start in range(0, counts.size, block):
            part = slice(start, start + block)
            grid_x = states[part][:, None, :]
            fx = fit_x[part][:, None, None]
            weight = counts[part][:, None, None]
            kl = self.family.kl(theta_col, grid_x, theta_fit, fx)
            divergence += np.sum(weight * kl, axis=0)
            max_step_kl = max(max_step_kl, float(np.max(kl)))
            if with_gradient:
                d_theta, d_x = self.family.kl_gradient(theta_col, grid_x, theta_fit, fx)
                gradient[..., 0] += np.sum(weight * d_theta, axis=0)
                gradient[..., 1] += np.sum(weight * d_x * fit_d[part][:, None, None], axis=0)

        i_tt, i_tx, i_xx = self.family.fisher(theta_fit, fit_x)
        cross = float(np.sum(counts * i_tx * fit_d))
        fisher = np.array([
            [float(np.sum(counts * i_tt)), cross],
            [cross, float(np.sum(counts * i_xx * fit_d * fit_d))],
        ])
        return RegionTerms(fit, divergence, gradient, fisher, max_step_kl)
