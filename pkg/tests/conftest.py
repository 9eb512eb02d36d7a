import numpy as np
import pytest

from src.shared.domain.box import Box
from src.contexts.dynamics.domain.value_objects import DynamicsParams
from src.contexts.rewards.domain.families import LaplaceAgent, LogisticGLM
from src.contexts.rewards.domain.value_objects import EstimateOrTruth, LaplaceAgentParams, LogisticGLMParams
from src.contexts.simulation.domain.value_objects import ArmSpec


UNIT = Box(0.0, 1.0)

# (x0, theta, A, B, K, alpha, beta) per action of the logistic experiment
LOGISTIC_ARMS = [
    (0.1, 0.5, 0.6, -1.0, 0.5, 0.4, 0.6),
    (0.3, 0.7, 0.7, -1.2, 0.5, 0.7, 0.3),
]


def logistic_arm(index: int) -> ArmSpec:
    x0, theta, a, b, k, alpha, beta = LOGISTIC_ARMS[index]
    return ArmSpec(
        DynamicsParams(a, b, k, UNIT),
        LogisticGLM(LogisticGLMParams(alpha, beta, UNIT)),
        EstimateOrTruth(theta, x0),
        name=f"action_{index}",
    )


@pytest.fixture
def unit_box():
    """The unit interval used for both X and Theta."""
    return UNIT


@pytest.fixture
def logistic_arms():
    """Both logistic arms of the experiment table."""
    return [logistic_arm(0), logistic_arm(1)]


@pytest.fixture
def action0_dynamics():
    return DynamicsParams(0.6, -1.0, 0.5, UNIT)


@pytest.fixture
def glm_family():
    """Logistic family with action-0 weights."""
    return LogisticGLM(LogisticGLMParams(0.4, 0.6, UNIT))


@pytest.fixture
def agent_family():
    return LaplaceAgent(LaplaceAgentParams(Box(0.1, 1.0)))


@pytest.fixture
def rng():
    """Seeded generator for reproducible draws."""
    return np.random.default_rng(12345)


@pytest.fixture
def experiment_data():
    """Small two-arm logistic experiment as raw config data."""
    return {
        "horizon": 12,
        "replicates": 2,
        "seed": 7,
        "arms": [
            {
                "name": "action_0",
                "family": "logistic_glm",
                "dynamics": {"A": 0.6, "B": -1.0, "K": 0.5},
                "truth": {"theta": 0.5, "x0": 0.1},
                "alpha": 0.4,
                "beta": 0.6,
            },
            {
                "name": "action_1",
                "family": "logistic_glm",
                "dynamics": {"A": 0.7, "B": -1.2, "K": 0.5},
                "truth": {"theta": 0.7, "x0": 0.3},
                "alpha": 0.7,
                "beta": 0.3,
            },
        ],
        "algorithms": ["ucb1_tuned", "random"],
        "search": {"theta_points": 11, "state_points": 11, "refine_iterations": 0},
    }
