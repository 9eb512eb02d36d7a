"""Projected-linear action-state recursion and its compositions.

All functions are pure. States are arrays whose last axis is the state
dimension, so a whole grid of initial states advances in one call.
"""
from typing import Sequence, Tuple, Union

import numpy as np

from src.shared.domain.box import Box
from src.shared.domain.exceptions import ConfigurationError
from src.contexts.dynamics.domain.value_objects import DynamicsParams


Indicator = Union[int, float, np.ndarray]


def project(x: Union[float, np.ndarray], box: Box) -> np.ndarray:
    """Coordinatewise clamp of x onto the box."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape[-1] != box.dim:
        raise ConfigurationError(f"Point of dimension {arr.shape[-1]} cannot be projected onto a {box.dim}-box")
    return box.project(arr)


def _pre_projection(x: np.ndarray, chosen: Indicator, dyn: DynamicsParams) -> np.ndarray:
    if x.shape[-1] != dyn.dim:
        raise ConfigurationError(f"State of dimension {x.shape[-1]} does not match dynamics of dimension {dyn.dim}")
    u = np.asarray(chosen, dtype=float)[..., None]
    return x @ dyn.A.T + u * dyn.B + dyn.K


def step(x: Union[float, np.ndarray], chosen: Indicator, dyn: DynamicsParams) -> np.ndarray:
    """One application of proj_X(A x + B chosen + K)."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    return dyn.state_box.project(_pre_projection(arr, chosen, dyn))


def rollout(x0: Union[float, np.ndarray], actions: Sequence[int], dyn: DynamicsParams) -> np.ndarray:
    """States [x_0, ..., x_t] under the indicator sequence; shape (t + 1, ..., d)."""
    x = np.atleast_1d(np.asarray(x0, dtype=float))
    states = [x]
    for chosen in actions:
        x = step(x, chosen, dyn)
        states.append(x)
    return np.stack(states)


def scalar_step(x: float, chosen: int, dyn: DynamicsParams) -> float:
    a, b, k, lower, upper = dyn.scalar_coefficients
    return min(max(a * x + b * chosen + k, lower), upper)


def scalar_trajectory(x0: float, actions: Sequence[int], dyn: DynamicsParams) -> Tuple[np.ndarray, np.ndarray]:
    """Fast path for one-dimensional dynamics: states and derivatives as flat float arrays."""
    a, b, k, lower, upper = dyn.scalar_coefficients
    n = len(actions)
    states = np.empty(n + 1)
    derivs = np.empty(n + 1)
    x, dx = float(x0), 1.0
    states[0], derivs[0] = x, dx
    for s, chosen in enumerate(actions):
        pre = a * x + b * chosen + k
        if pre < lower:
            x, dx = lower, 0.0
        elif pre > upper:
            x, dx = upper, 0.0
        else:
            x, dx = pre, a * dx
        states[s + 1], derivs[s + 1] = x, dx
    return states, derivs
