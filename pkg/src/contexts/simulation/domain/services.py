from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.shared.domain.exceptions import ConfigurationError, ValidationError
from src.contexts.policies.domain.base import BanditPolicy
from src.contexts.simulation.domain.environment import Environment, advance_states, env_step
from src.contexts.simulation.domain.value_objects import ArmSpec, CurveSet, EpisodeResult


ORACLE_MODES = ("greedy", "exact_dp")
DEFAULT_SEQUENCE_BUDGET = 2 ** 20

Seed = Union[int, Sequence[int]]


def _greedy_actions(arms: Sequence[ArmSpec], horizon: int) -> List[int]:
    states = [arm.truth.x0 for arm in arms]
    actions = []
    for _ in range(horizon):
        means = np.array([arm.mean(x) for arm, x in zip(arms, states)])
        action = int(np.argmax(means))
        actions.append(action)
        states = advance_states(arms, states, action)
    return actions


def _exact_actions(arms: Sequence[ArmSpec], horizon: int, budget: int) -> List[int]:
    if len(arms) ** horizon > budget:
        raise ConfigurationError(
            f"exact_dp would enumerate {len(arms)}^{horizon} sequences, above the budget of {budget}"
        )
    memo: Dict[Tuple[int, Tuple[float, ...]], Tuple[float, int]] = {}

    def best(remaining: int, states: Tuple[float, ...]) -> Tuple[float, int]:
        if remaining == 0:
            return 0.0, -1
        key = (remaining, states)
        if key not in memo:
            best_value, best_action = -np.inf, -1
            for action, arm in enumerate(arms):
                following = tuple(advance_states(arms, states, action))
                value = arm.mean(states[action]) + best(remaining - 1, following)[0]
                if value > best_value:
                    best_value, best_action = value, action
            memo[key] = (best_value, best_action)
        return memo[key]

    states = tuple(arm.truth.x0 for arm in arms)
    actions = []
    for remaining in range(horizon, 0, -1):
        _, action = best(remaining, states)
        actions.append(action)
        states = tuple(advance_states(arms, states, action))
    return actions


def oracle_actions(
    arms: Sequence[ArmSpec], horizon: int, mode: str = "greedy", budget: int = DEFAULT_SEQUENCE_BUDGET
) -> List[int]:
    """Benchmark action sequence: per-step argmax of g (greedy) or the best full sequence (exact_dp)."""
    if horizon < 1:
        raise ConfigurationError(f"Horizon must be at least 1, got {horizon}")
    if mode == "greedy":
        return _greedy_actions(arms, horizon)
    if mode == "exact_dp":
        return _exact_actions(arms, horizon, budget)
    raise ConfigurationError(f"Unknown oracle mode '{mode}', expected one of {', '.join(ORACLE_MODES)}")


def expected_reward_path(arms: Sequence[ArmSpec], actions: Sequence[int]) -> np.ndarray:
    """g of the chosen arm at each step along the trajectory the actions induce."""
    states = [arm.truth.x0 for arm in arms]
    path = np.empty(len(actions))
    for s, action in enumerate(actions):
        path[s] = arms[action].mean(states[action])
        states = advance_states(arms, states, action)
    return path


def seed_streams(seed: Seed) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent environment and policy generators from one seed."""
    env_seq, policy_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(env_seq), np.random.default_rng(policy_seq)


def run_episode(
    policy: BanditPolicy,
    arms: Sequence[ArmSpec],
    horizon: int,
    seed: Seed,
    oracle_mode: str = "greedy",
    oracle_expected: Optional[np.ndarray] = None,
    algorithm: Optional[str] = None,
    replicate: int = 0,
) -> EpisodeResult:
    """Run the policy for horizon steps on a fresh environment and score it against the oracle.

    Regret compares expected rewards g on the oracle's own trajectory and on the policy's.
    """
    if horizon < 1:
        raise ConfigurationError(f"Horizon must be at least 1, got {horizon}")
    if oracle_expected is None:
        oracle_expected = expected_reward_path(arms, oracle_actions(arms, horizon, oracle_mode))
    oracle_expected = np.asarray(oracle_expected, dtype=float)
    if oracle_expected.size != horizon:
        raise ValidationError(f"Oracle path has {oracle_expected.size} steps, expected {horizon}")

    env_rng, policy_rng = seed_streams(seed)
    env = Environment(arms, env_rng)
    actions = np.empty(horizon, dtype=np.int64)
    rewards = np.empty(horizon)
    expected = np.empty(horizon)
    for s in range(horizon):
        action = policy.select(policy_rng)
        actions[s] = action
        expected[s] = env.expected_reward(action)
        rewards[s] = env_step(env, action)
        policy.observe(action, rewards[s])

    seed_list = [int(seed)] if np.isscalar(seed) else [int(v) for v in seed]
    return EpisodeResult(
        algorithm=algorithm or policy.name,
        replicate=replicate,
        seed=seed_list,
        actions=actions,
        rewards=rewards,
        expected=expected,
        oracle_expected=oracle_expected,
    )


def aggregate_curves(results: Sequence[EpisodeResult]) -> CurveSet:
    """Mean and standard error (ddof=1; zero for a single replicate) of regret and average reward."""
    if not results:
        raise ValidationError("Cannot aggregate an empty set of episodes")
    regret = np.stack([r.cumulative_regret for r in results])
    average = np.stack([r.average_reward for r in results])
    count = len(results)

    def stderr(values: np.ndarray) -> np.ndarray:
        if count == 1:
            return np.zeros(values.shape[1])
        return values.std(axis=0, ddof=1) / np.sqrt(count)

    return CurveSet(
        algorithm=results[0].algorithm,
        replicates=count,
        mean_regret=regret.mean(axis=0),
        stderr_regret=stderr(regret),
        mean_average_reward=average.mean(axis=0),
        stderr_average_reward=stderr(average),
    )
