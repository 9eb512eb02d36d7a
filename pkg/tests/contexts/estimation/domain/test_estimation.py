import math

import numpy as np
import pytest

from src.shared.domain.box import Box
from src.shared.domain.exceptions import ConfigurationError, EstimationError, ValidationError
from src.contexts.dynamics.domain.services import scalar_step, scalar_trajectory
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.estimation.domain.estimator import ArmEstimator
from src.contexts.estimation.domain.radii import radius_B
from src.contexts.estimation.domain.services import (
    fit_mle, negative_log_likelihood, refine_ucb, tuned_variance, ucb_reward
)
from src.contexts.estimation.domain.value_objects import ArmHistory, ConfidenceConfig, MLEFit, SearchConfig
from src.contexts.rewards.domain.families import LaplaceAgent, LogisticGLM
from src.contexts.rewards.domain.trajectory import fisher_info, trajectory_kl, trajectory_kl_gradient
from src.contexts.rewards.domain.value_objects import EstimateOrTruth, LaplaceAgentParams, LogisticGLMParams


UNIT = Box(0.0, 1.0)
INTERIOR = DynamicsParams(0.8, -0.1, 0.1, UNIT)
SMALL_GRID = SearchConfig(theta_points=11, state_points=11, refine_iterations=0)


def simulate_history(truth, dyn, family, n_obs, rng, pull_probability=0.5):
    """Random pull indicators with rewards drawn at the truth's states until n_obs pulls."""
    indicators, rewards = [], []
    x = truth.x0
    while len(rewards) < n_obs:
        chosen = int(rng.random() < pull_probability)
        if chosen:
            rewards.append(family.sample(truth.theta, x, rng))
        indicators.append(chosen)
        x = scalar_step(x, chosen, dyn)
    return ArmHistory(indicators, rewards)


class TestArmHistory:
    """Test cases for ArmHistory."""

    def test_from_episode(self):
        """Test building one arm's history from a whole episode."""
        history = ArmHistory.from_episode(1, [0, 1, 1, 0], [0.0, 1.0, 0.5, 1.0])
        assert history.indicators.tolist() == [0, 1, 1, 0]
        assert history.rewards.tolist() == [1.0, 0.5]
        assert history.pull_times.tolist() == [1, 2]
        assert history.n_obs == 2 and history.steps == 4

    def test_reward_count_mismatch(self):
        """Test rewards must match the number of pulls."""
        with pytest.raises(ValidationError):
            ArmHistory([1, 0, 1], [1.0])

    def test_indicators_must_be_binary(self):
        """Test indicators other than 0 and 1 are rejected."""
        with pytest.raises(ValidationError):
            ArmHistory([2], [1.0, 1.0])


class TestArmEstimator:
    """Test cases for the incremental grid estimator."""

    @pytest.fixture
    def history(self, agent_family, rng):
        return simulate_history(EstimateOrTruth(0.3, 0.6), INTERIOR, agent_family, 15, rng)

    def test_requires_scalar_dynamics(self, glm_family):
        """Test vector dynamics are rejected."""
        box = Box([0.0, 0.0], [1.0, 1.0])
        dyn = DynamicsParams([[0.5, 0.0], [0.0, 0.5]], [0.0, 0.0], [0.0, 0.0], box)
        with pytest.raises(ConfigurationError):
            ArmEstimator(dyn, glm_family, SMALL_GRID)

    def test_grid_fit_without_data(self, glm_family):
        """Test fitting before any pull fails."""
        with pytest.raises(EstimationError):
            ArmEstimator(INTERIOR, glm_family, SMALL_GRID).grid_fit()

    def test_incremental_log_likelihood(self, history, agent_family):
        """Test the accumulated grid log-likelihood matches the direct trajectory likelihood."""
        estimator = ArmEstimator.from_history(history, INTERIOR, agent_family, SMALL_GRID)
        for i, j in [(0, 0), (3, 7), (9, 10)]:
            point = EstimateOrTruth(estimator.thetas[i], estimator.x0_grid[j])
            expected = -negative_log_likelihood(point, history, INTERIOR, agent_family)
            assert estimator.log_likelihood[i, j] == pytest.approx(expected, abs=1e-9)

    def test_current_states_follow_rollout(self, history, agent_family):
        """Test grid states advance exactly as a rollout of the indicators."""
        estimator = ArmEstimator.from_history(history, INTERIOR, agent_family, SMALL_GRID)
        states, _ = scalar_trajectory(estimator.x0_grid[4], list(history.indicators), INTERIOR)
        assert estimator.current_states[4] == pytest.approx(states[-1])
        assert estimator.steps == history.steps and estimator.n_obs == history.n_obs

    @pytest.mark.parametrize("on_grid", [True, False])
    def test_region_terms_match_direct_evaluation(self, history, agent_family, on_grid):
        """Test grouped divergence, gradient, variance and Fisher terms match per-point evaluation."""
        estimator = ArmEstimator.from_history(history, INTERIOR, agent_family, SMALL_GRID)
        if on_grid:
            fit, index = estimator.grid_fit()
        else:
            fit, index = MLEFit(EstimateOrTruth(0.37, 0.52), 1.0, history.n_obs), None
        terms = estimator.region_terms(fit, index, with_gradient=True)
        times, indicators = history.pull_times, history.indicators

        for i, j in [(1, 2), (5, 5), (10, 0)]:
            point = EstimateOrTruth(estimator.thetas[i], estimator.x0_grid[j])
            kl = trajectory_kl(point, fit.estimate, times, indicators, INTERIOR, agent_family)
            assert terms.divergence[i, j] == pytest.approx(kl, rel=1e-9, abs=1e-12)
            gradient = trajectory_kl_gradient(point, fit.estimate, times, indicators, INTERIOR, agent_family)
            np.testing.assert_allclose(terms.gradient[i, j], gradient, rtol=1e-9, atol=1e-12)
            variance = tuned_variance(fit, point, history, INTERIOR, agent_family)
            assert terms.variance()[i, j] == pytest.approx(variance, rel=1e-7, abs=1e-14)

        np.testing.assert_allclose(
            terms.fisher, fisher_info(fit.estimate, times, indicators, INTERIOR, agent_family), rtol=1e-9
        )
        assert terms.average_divergence.shape == (11, 11)

    def test_variance_needs_gradient(self, history, agent_family):
        """Test variance is unavailable without divergence gradients."""
        estimator = ArmEstimator.from_history(history, INTERIOR, agent_family, SMALL_GRID)
        fit, index = estimator.grid_fit()
        with pytest.raises(EstimationError):
            estimator.region_terms(fit, index).variance()

    def test_ties_go_to_smallest_point(self):
        """Test a flat likelihood resolves to the smallest (theta, x0)."""
        flat = LogisticGLM(LogisticGLMParams(0.0, 0.0, UNIT))
        estimator = ArmEstimator(INTERIOR, flat, SMALL_GRID)
        estimator.record(1.0)
        fit, index = estimator.grid_fit()
        assert index == (0, 0)
        assert (fit.estimate.theta, fit.estimate.x0) == (0.0, 0.0)

    def test_snapshot_refreshes_every_k_observations(self, agent_family):
        """Test the cached region is reused until refit_every new rewards arrive."""
        search = SearchConfig(theta_points=11, state_points=11, refine_iterations=0, refit_every=3)
        estimator = ArmEstimator(INTERIOR, agent_family, search)
        estimator.record(0.4)
        estimator.advance(1)
        first = estimator.snapshot()
        for reward in (0.2, 0.9):
            estimator.record(reward)
            estimator.advance(1)
            assert estimator.snapshot() is first
        estimator.record(0.5)
        estimator.advance(1)
        assert estimator.snapshot() is not first
        assert estimator.snapshot().n_obs == 4

    def test_snapshot_uses_refined_fit(self, glm_family, rng):
        """Test a snapshot with refinement enabled carries the fit_mle estimate."""
        history = simulate_history(EstimateOrTruth(0.5, 0.1), INTERIOR, glm_family, 20, rng)
        search = SearchConfig(theta_points=6, state_points=6, refine_iterations=80)
        estimator = ArmEstimator.from_history(history, INTERIOR, glm_family, search)
        grid, _ = estimator.grid_fit()
        fit = estimator.snapshot().fit
        assert fit == fit_mle(history, INTERIOR, glm_family, search)
        assert fit.objective <= grid.objective
        if fit != grid:
            assert estimator.fit_index is None


class TestFitMLE:
    """Test cases for maximum-likelihood fitting."""

    def test_empty_history(self, glm_family):
        """Test fitting without observations fails."""
        with pytest.raises(EstimationError):
            fit_mle(ArmHistory([0, 0], []), INTERIOR, glm_family, SMALL_GRID)

    def test_all_successes_hit_upper_corner(self, glm_family):
        """Test all-success rewards push the estimate to the upper corner."""
        identity = DynamicsParams(1.0, 0.0, 0.0, UNIT)
        history = ArmHistory([1, 0, 1, 1, 0, 1], [1.0, 1.0, 1.0, 1.0])
        search = SearchConfig(theta_points=11, state_points=11, refine_iterations=50)
        fit = fit_mle(history, identity, glm_family, search)
        assert (fit.estimate.theta, fit.estimate.x0) == (1.0, 1.0)

    def test_single_agent_observation(self, agent_family):
        """Test a single censored observation fits at least as well as the grid."""
        history = ArmHistory([1], [0.4])
        fit = fit_mle(history, INTERIOR, agent_family, SMALL_GRID)
        grid = ArmEstimator.from_history(history, INTERIOR, agent_family, SMALL_GRID)
        assert fit.objective <= -grid.log_likelihood.max() + 1e-12
        assert fit.objective <= -math.log(1 / (2 * 1.0))
        assert fit.n_obs == 1

    @pytest.mark.parametrize("family_name", ["glm_family", "agent_family"])
    def test_objective_not_above_truth(self, request, rng, family_name):
        """Test the fitted objective never exceeds the objective at the truth."""
        family = request.getfixturevalue(family_name)
        truth = EstimateOrTruth(family.theta_box.grid(11)[4], UNIT.grid(11)[1])
        history = simulate_history(truth, INTERIOR, family, 60, rng)
        search = SearchConfig(theta_points=11, state_points=11, refine_iterations=100)
        fit = fit_mle(history, INTERIOR, family, search)
        at_truth = negative_log_likelihood(truth, history, INTERIOR, family) / history.n_obs
        assert fit.objective <= at_truth + 1e-9
        assert family.theta_box.contains(fit.estimate.theta) and UNIT.contains(fit.estimate.x0)

    @pytest.mark.slow
    @pytest.mark.parametrize("family_name,truth", [
        ("glm_family", EstimateOrTruth(0.5, 0.1)),
        ("agent_family", EstimateOrTruth(0.3, 0.4)),
    ])
    def test_consistency(self, request, family_name, truth):
        """Test the median divergence of the fit shrinks with more observations."""
        family = request.getfixturevalue(family_name)
        search = SearchConfig(theta_points=41, state_points=41, refine_iterations=200)
        medians = []
        for n in (50, 200, 800):
            values = []
            for replicate in range(20):
                rng = np.random.default_rng([n, replicate])
                history = simulate_history(truth, INTERIOR, family, n, rng)
                fit = fit_mle(history, INTERIOR, family, search)
                kl = trajectory_kl(truth, fit.estimate, history.pull_times, history.indicators, INTERIOR, family)
                values.append(kl / n)
            medians.append(float(np.median(values)))
        assert medians[0] > medians[1] > medians[2]
        assert medians[2] <= 0.25 * medians[0]

    @pytest.mark.slow
    def test_coverage(self, glm_family):
        """Test the concentration bound covers the truth in at least 95% of runs."""
        cfg = ConfidenceConfig(lipschitz_f=1.0, lipschitz_p=1.0, sigma=0.5)
        truth, n = EstimateOrTruth(0.5, 0.1), 50
        bound = radius_B(0.05, cfg) * math.sqrt(math.log(20) / n)
        action0 = DynamicsParams(0.6, -1.0, 0.5, UNIT)
        search = SearchConfig(theta_points=21, state_points=21, refine_iterations=0)
        covered = 0
        for replicate in range(200):
            history = simulate_history(truth, action0, glm_family, n, np.random.default_rng(replicate))
            fit = fit_mle(history, action0, glm_family, search)
            kl = trajectory_kl(truth, fit.estimate, history.pull_times, history.indicators, action0, glm_family)
            covered += kl / n <= bound
        assert covered / 200 >= 0.95


class TestTunedVariance:
    """Test cases for the delta-method variance."""

    def test_zero_at_fit(self, agent_family, rng):
        """Test the variance vanishes at the fit itself."""
        history = simulate_history(EstimateOrTruth(0.3, 0.6), INTERIOR, agent_family, 20, rng)
        fit = fit_mle(history, INTERIOR, agent_family, SMALL_GRID)
        assert tuned_variance(fit, fit.estimate, history, INTERIOR, agent_family) == pytest.approx(0.0, abs=1e-20)

    def test_non_negative(self, glm_family, rng):
        """Test the variance is never negative."""
        history = simulate_history(EstimateOrTruth(0.6, 0.3), INTERIOR, glm_family, 20, rng)
        fit = fit_mle(history, INTERIOR, glm_family, SMALL_GRID)
        for _ in range(10):
            candidate = EstimateOrTruth(rng.uniform(0, 1), rng.uniform(0, 1))
            assert tuned_variance(fit, candidate, history, INTERIOR, glm_family) >= 0.0

    def test_single_glm_observation(self, glm_family):
        """Test the rank-one information case: S = (mu_fit - mu_candidate)^2 / (mu_fit (1 - mu_fit))."""
        history = ArmHistory([1], [1.0])
        fit = MLEFit(EstimateOrTruth(0.6, 0.4), 0.5, 1)
        candidate = EstimateOrTruth(0.2, 0.9)
        mu_fit = float(glm_family.mean(0.6, 0.4))
        mu_cand = float(glm_family.mean(0.2, 0.9))
        expected = (mu_fit - mu_cand) ** 2 / (mu_fit * (1 - mu_fit))
        assert tuned_variance(fit, candidate, history, INTERIOR, glm_family) == pytest.approx(expected, rel=1e-6)

    def test_gradient_matches_finite_differences(self, glm_family, rng):
        """Test the divergence gradient matches central finite differences."""
        h = 1e-6
        for _ in range(10):
            indicators = list(rng.integers(0, 2, size=12))
            indicators[0] = 1
            times = [s for s, u in enumerate(indicators) if u]
            candidate = EstimateOrTruth(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9))
            fit = EstimateOrTruth(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9))
            gradient = trajectory_kl_gradient(candidate, fit, times, indicators, INTERIOR, glm_family)

            def value(theta, x0):
                return trajectory_kl(candidate, EstimateOrTruth(theta, x0), times, indicators, INTERIOR, glm_family)

            fd = np.array([
                (value(fit.theta + h, fit.x0) - value(fit.theta - h, fit.x0)) / (2 * h),
                (value(fit.theta, fit.x0 + h) - value(fit.theta, fit.x0 - h)) / (2 * h),
            ])
            np.testing.assert_allclose(gradient, fd, rtol=1e-5, atol=1e-10)


class TestUcbReward:
    """Test cases for the UCB inner maximization."""

    def test_empty_history(self, glm_family):
        """Test bounding an arm without observations fails."""
        fit = MLEFit(EstimateOrTruth(0.5, 0.5), 0.5, 1)
        with pytest.raises(EstimationError):
            ucb_reward(fit, 1.0, ArmHistory([0], []), INTERIOR, glm_family, SMALL_GRID)

    def test_huge_radius_gives_global_maximum(self, glm_family, rng):
        """Test an unbounded radius reaches the global maximum of the mean."""
        history = simulate_history(EstimateOrTruth(0.5, 0.1), INTERIOR, glm_family, 5, rng)
        fit = fit_mle(history, INTERIOR, glm_family, SMALL_GRID)
        value = ucb_reward(fit, 1e9, history, INTERIOR, glm_family, SMALL_GRID)
        top_state = scalar_trajectory(1.0, list(history.indicators), INTERIOR)[0][-1]
        assert value == pytest.approx(float(glm_family.mean(1.0, top_state)))

    def test_zero_radius_gives_fit_mean(self, agent_family):
        """Test a zero radius collapses the bound to the fit's mean."""
        history = ArmHistory([1], [0.4])
        fit = fit_mle(history, INTERIOR, agent_family, SMALL_GRID)
        value = ucb_reward(fit, 0.0, history, INTERIOR, agent_family, SMALL_GRID)
        expected = float(agent_family.mean(fit.estimate.theta, scalar_step(fit.estimate.x0, 1, INTERIOR)))
        assert value == pytest.approx(expected)

    def test_monotone_in_radius(self, glm_family, rng):
        """Test the bound never decreases as the radius grows."""
        history = simulate_history(EstimateOrTruth(0.5, 0.1), INTERIOR, glm_family, 30, rng)
        fit = fit_mle(history, INTERIOR, glm_family, SMALL_GRID)
        values = [ucb_reward(fit, r, history, INTERIOR, glm_family, SMALL_GRID) for r in (0.0, 1e-3, 1e-2, 0.1, 1.0)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_refined_value_not_below_fit(self, agent_family, rng):
        """Test the refined bound stays at or above the fit's mean."""
        history = simulate_history(EstimateOrTruth(0.3, 0.6), INTERIOR, agent_family, 20, rng)
        search = SearchConfig(theta_points=11, state_points=11, refine_iterations=40)
        fit = fit_mle(history, INTERIOR, agent_family, search)
        value = ucb_reward(fit, 0.01, history, INTERIOR, agent_family, search)
        state = scalar_trajectory(fit.estimate.x0, list(history.indicators), INTERIOR)[0][-1]
        assert value >= float(agent_family.mean(fit.estimate.theta, state))

    def test_refinement_accepts_a_radius_function(self, glm_family, rng):
        """Test a constant radius function refines exactly like the constant radius."""
        history = simulate_history(EstimateOrTruth(0.5, 0.1), INTERIOR, glm_family, 15, rng)
        search = SearchConfig(theta_points=6, state_points=6, refine_iterations=40)
        fit = fit_mle(history, INTERIOR, glm_family, search)
        constant = refine_ucb(fit, 0.02, history, INTERIOR, glm_family, search, fit.estimate)
        rule = refine_ucb(fit, lambda _: 0.02, history, INTERIOR, glm_family, search, fit.estimate)
        assert constant is not None
        assert rule == pytest.approx(constant)

    def test_refinement_never_lowers_grid_value(self, glm_family, rng):
        """Test the refined upper bound is at least the grid-only one."""
        history = simulate_history(EstimateOrTruth(0.5, 0.1), INTERIOR, glm_family, 15, rng)
        search = SearchConfig(theta_points=6, state_points=6, refine_iterations=40)
        fit = fit_mle(history, INTERIOR, glm_family, search)
        coarse = SearchConfig(theta_points=6, state_points=6, refine_iterations=0)
        assert ucb_reward(fit, 0.02, history, INTERIOR, glm_family, search) >= ucb_reward(
            fit, 0.02, history, INTERIOR, glm_family, coarse
        )
