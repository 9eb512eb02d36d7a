from typing import Sequence, Union

import numpy as np

from src.shared.domain.base_value_object import BaseValueObject
from src.shared.domain.box import Box
from src.shared.domain.exceptions import ConfigurationError


Matrix = Union[float, Sequence[Sequence[float]], np.ndarray]
Vector = Union[float, Sequence[float], np.ndarray]

SPECTRAL_NORM_TOLERANCE = 1e-9


class DynamicsParams(BaseValueObject):
    """Known per-action recursion x' = proj_X(A x + B u + K), u the 0/1 pull indicator."""

    def __init__(self, A: Matrix, B: Vector, K: Vector, state_box: Box):
        A_arr = np.atleast_2d(np.asarray(A, dtype=float))
        B_arr = np.atleast_1d(np.asarray(B, dtype=float))
        K_arr = np.atleast_1d(np.asarray(K, dtype=float))
        d = state_box.dim

        if A_arr.shape != (d, d):
            raise ConfigurationError(f"A must be {d}x{d} to match the state box, got shape {A_arr.shape}")
        if B_arr.shape != (d,) or K_arr.shape != (d,):
            raise ConfigurationError(
                f"B and K must have length {d}, got shapes {B_arr.shape} and {K_arr.shape}"
            )
        if not (np.all(np.isfinite(A_arr)) and np.all(np.isfinite(B_arr)) and np.all(np.isfinite(K_arr))):
            raise ConfigurationError("Dynamics coefficients must be finite")

        spectral_norm = float(np.linalg.norm(A_arr, 2))
        if spectral_norm > 1.0 + SPECTRAL_NORM_TOLERANCE:
            raise ConfigurationError(f"Spectral norm of A must be at most 1, got {spectral_norm:.6g}")

        self.A = A_arr
        self.B = B_arr
        self.K = K_arr
        self.state_box = state_box
        self._scalar = None
        if d == 1:
            lower, upper = state_box.bounds
            self._scalar = (float(A_arr[0, 0]), float(B_arr[0]), float(K_arr[0]), lower, upper)

    @property
    def dim(self) -> int:
        return self.state_box.dim

    @property
    def is_scalar(self) -> bool:
        return self.dim == 1

    @property
    def scalar_coefficients(self) -> tuple:
        """(a, b, k, lower, upper) of a one-dimensional recursion."""
        if self._scalar is None:
            raise ConfigurationError(f"Expected scalar dynamics, got dimension {self.dim}")
        return self._scalar
