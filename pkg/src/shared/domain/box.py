from typing import Sequence, Tuple, Union

import numpy as np

from src.shared.domain.base_value_object import BaseValueObject
from src.shared.domain.exceptions import ConfigurationError


Bound = Union[float, Sequence[float], np.ndarray]


class Box(BaseValueObject):
    """Axis-aligned closed box, used for both the state set X and the parameter set Theta."""

    def __init__(self, lower: Bound, upper: Bound):
        lower_arr = np.atleast_1d(np.asarray(lower, dtype=float))
        upper_arr = np.atleast_1d(np.asarray(upper, dtype=float))
        if lower_arr.ndim != 1 or lower_arr.shape != upper_arr.shape:
            raise ConfigurationError(
                f"Box bounds must be vectors of equal length, got {lower_arr.shape} and {upper_arr.shape}"
            )
        if not (np.all(np.isfinite(lower_arr)) and np.all(np.isfinite(upper_arr))):
            raise ConfigurationError("Box bounds must be finite")
        if np.any(lower_arr >= upper_arr):
            raise ConfigurationError(
                f"Box lower bounds must be strictly below upper bounds, got {lower_arr.tolist()} >= {upper_arr.tolist()}"
            )
        self.lower = lower_arr
        self.upper = upper_arr

    @classmethod
    def interval(cls, bounds: Sequence[float]) -> "Box":
        if len(bounds) != 2:
            raise ConfigurationError(f"An interval needs exactly two bounds, got {list(bounds)}")
        return cls(bounds[0], bounds[1])

    @property
    def dim(self) -> int:
        return int(self.lower.shape[0])

    @property
    def bounds(self) -> Tuple[float, float]:
        """Scalar (lower, upper) pair of a one-dimensional box."""
        self._require_scalar()
        return float(self.lower[0]), float(self.upper[0])

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    def project(self, x: np.ndarray) -> np.ndarray:
        """Euclidean projection onto the box; accepts (..., dim) arrays."""
        return np.clip(x, self.lower, self.upper)

    def contains(self, x: Bound, tol: float = 0.0) -> bool:
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        return bool(np.all(arr >= self.lower - tol) and np.all(arr <= self.upper + tol))

    def grid(self, points: int) -> np.ndarray:
        """Evenly spaced points over a one-dimensional box, endpoints included."""
        self._require_scalar()
        if points < 2:
            raise ConfigurationError(f"A grid needs at least 2 points, got {points}")
        return np.linspace(self.lower[0], self.upper[0], points)

    def _require_scalar(self) -> None:
        if self.dim != 1:
            raise ConfigurationError(f"Expected a one-dimensional box, got dimension {self.dim}")
