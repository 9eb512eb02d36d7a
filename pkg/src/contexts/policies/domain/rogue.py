"""Model-based UCB policies that estimate each arm's (theta, x0) through its known dynamics."""
from typing import List, Sequence

import numpy as np

from src.contexts.estimation.domain.estimator import ArmEstimator, RegionTerms
from src.contexts.estimation.domain.radii import theoretical_radius, tuned_radius
from src.contexts.estimation.domain.services import RadiusRule, refine_ucb, tuned_variance
from src.contexts.estimation.domain.value_objects import ConfidenceConfig, MLEFit, SearchConfig
from src.contexts.policies.domain.base import BanditPolicy, argmax_lowest
from src.contexts.policies.domain.value_objects import ArmModel


class RogueUCBPolicy(BanditPolicy):
    """Play the arm whose optimistic current mean over its confidence region is largest.

    The region of an arm holds the points whose average trajectory divergence
    to the arm's grid fit is at most A(t) sqrt(4 ln t / n). The index is the
    best feasible grid mean; with search.refine_iterations > 0 a bounded
    Nelder-Mead pass from that grid point may raise it.
    """

    name = "rogue_ucb"
    needs_gradient = False

    def __init__(self, models: Sequence[ArmModel], confidence: ConfidenceConfig, search: SearchConfig):
        super().__init__(len(models))
        self.confidence = confidence
        self.search = search
        self.estimators = [ArmEstimator(m.dynamics, m.family, search) for m in models]

    def feasible(self, terms: RegionTerms, t: int) -> np.ndarray:
        return terms.average_divergence <= theoretical_radius(t, terms.n_obs, self.confidence)

    def radius_rule(self, terms: RegionTerms, estimator: ArmEstimator, t: int) -> RadiusRule:
        return theoretical_radius(t, terms.n_obs, self.confidence)

    def fits(self) -> List[MLEFit]:
        return [est.snapshot(self.needs_gradient).fit for est in self.estimators]

    def arm_index(self, estimator: ArmEstimator, t: int) -> float:
        """Best feasible grid mean, lifted by a Nelder-Mead pass when refinement is enabled."""
        terms = estimator.snapshot(self.needs_gradient)
        best, cell = estimator.best_feasible(self.feasible(terms, t))
        if self.search.refine_iterations == 0:
            # grid fit has zero divergence, so best is finite
            return best
        value = max(best, estimator.current_mean(terms.fit.estimate))
        refined = refine_ucb(
            terms.fit,
            self.radius_rule(terms, estimator, t),
            estimator.history(),
            estimator.dynamics,
            estimator.family,
            self.search,
            cell if cell is not None else terms.fit.estimate,
        )
        return value if refined is None else max(value, refined)

    def _select(self, rng: np.random.Generator) -> int:
        t = self.t + 1
        indices = np.array([self.arm_index(est, t) for est in self.estimators])
        self.last_indices = indices
        return argmax_lowest(indices)

    def _observe(self, action: int, reward: float) -> None:
        for arm, estimator in enumerate(self.estimators):
            if arm == action:
                estimator.record(reward)
            estimator.advance(int(arm == action))


class TunedRogueUCBPolicy(RogueUCBPolicy):
    """Same decision rule with the data-driven radius sqrt(min(eta/4, S) ln t / n).

    S is evaluated at each candidate, so feasibility is checked point by point.
    eta defaults to the largest per-step divergence seen over the grid at the fit.
    """

    name = "tuned_rogue_ucb"
    needs_gradient = True

    def eta(self, terms: RegionTerms) -> float:
        return self.confidence.eta if self.confidence.eta is not None else terms.max_step_kl

    def feasible(self, terms: RegionTerms, t: int) -> np.ndarray:
        radius = tuned_radius(terms.variance(), self.eta(terms), t, terms.n_obs)
        return terms.average_divergence <= radius

    def radius_rule(self, terms: RegionTerms, estimator: ArmEstimator, t: int) -> RadiusRule:
        history = estimator.history()
        eta = self.eta(terms)

        def radius(candidate) -> float:
            variance = tuned_variance(terms.fit, candidate, history, estimator.dynamics, estimator.family)
            return float(tuned_radius(variance, eta, t, terms.n_obs))

        return radius
