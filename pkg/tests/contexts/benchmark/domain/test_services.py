import numpy as np
import pytest

from src.shared.domain.exceptions import ValidationError
from src.contexts.simulation.domain.value_objects import EpisodeResult
from src.contexts.benchmark.domain.services import pool_episodes, regret_growth_ratio, summarize_episodes


def constant_gap_episode(replicate: int, gap: float, horizon: int = 10) -> EpisodeResult:
    return EpisodeResult(
        "random", replicate, [replicate],
        actions=np.zeros(horizon, dtype=int),
        rewards=np.ones(horizon),
        expected=np.full(horizon, 0.5),
        oracle_expected=np.full(horizon, 0.5 + gap),
    )


class TestRegretGrowthRatio:
    """Test cases for the regret growth diagnostic."""

    def test_linear_regret_doubles(self):
        """Test linear regret gives a ratio of two."""
        assert regret_growth_ratio(np.arange(1.0, 11.0)) == pytest.approx(2.0)

    def test_flat_regret(self):
        """Test regret that stops growing gives a ratio of one."""
        assert regret_growth_ratio(np.array([0.0, 3.0, 3.0, 3.0])) == pytest.approx(1.0)

    def test_undefined_cases(self):
        """Test too short or zero half-horizon regret gives no ratio."""
        assert regret_growth_ratio(np.array([1.0])) is None
        assert regret_growth_ratio(np.array([0.0, 0.0, 1.0, 2.0])) is None

    def test_negative_regret_has_no_ratio(self):
        """Test regret below a heuristic oracle yields no ratio instead of a sign-flipped one."""
        assert regret_growth_ratio(np.array([-1.0, -2.0, -3.0, -4.0])) is None
        assert regret_growth_ratio(np.array([1.0, 1.0, 0.0, -1.0])) is None


class TestSummarizeEpisodes:
    """Test cases for per-algorithm summaries."""

    def test_summary_fields(self):
        """Test means, standard errors and the growth ratio of a two-replicate summary."""
        episodes = {"random": [constant_gap_episode(0, 0.1), constant_gap_episode(1, 0.3)]}
        (summary,) = summarize_episodes(episodes)
        assert summary.algorithm == "random"
        assert summary.replicates == 2
        assert summary.horizon == 10
        assert summary.final_regret_mean == pytest.approx(2.0)
        assert summary.final_regret_stderr == pytest.approx(1.0)
        assert summary.final_average_reward_mean == pytest.approx(1.0)
        assert summary.final_average_reward_stderr == 0.0
        assert summary.regret_growth_ratio == pytest.approx(2.0)

    def test_empty(self):
        """Test summarizing nothing is rejected."""
        with pytest.raises(ValidationError):
            summarize_episodes({})


class TestPoolEpisodes:
    """Test cases for pooling result sets."""

    def test_renumbers_replicates(self):
        """Test pooled replicates are numbered in source order."""
        first = {"random": [constant_gap_episode(0, 0.1), constant_gap_episode(1, 0.2)]}
        second = {"random": [constant_gap_episode(0, 0.3)]}
        pooled = pool_episodes([first, second])
        assert [episode.replicate for episode in pooled["random"]] == [0, 1, 2]
        assert pooled["random"][2].oracle_expected[0] == pytest.approx(0.8)

    def test_mismatched_horizons(self):
        """Test sources with different horizons cannot be pooled."""
        first = {"random": [constant_gap_episode(0, 0.1, horizon=10)]}
        second = {"random": [constant_gap_episode(0, 0.1, horizon=8)]}
        with pytest.raises(ValidationError):
            pool_episodes([first, second])

    def test_nothing_to_pool(self):
        """Test empty input and disjoint algorithms are rejected."""
        with pytest.raises(ValidationError):
            pool_episodes([])
        with pytest.raises(ValidationError):
            pool_episodes([{"random": [constant_gap_episode(0, 0.1)]}, {"d_ucb": [constant_gap_episode(0, 0.1)]}])
