from abc import ABC
from typing import Any

import numpy as np


def _freeze(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return (value.shape, tuple(value.ravel().tolist()))
    if isinstance(value, BaseValueObject):
        return (value.__class__.__name__, tuple(sorted((k, _freeze(v)) for k, v in value.__dict__.items())))
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    return value


class BaseValueObject(ABC):
    """Base value object class following DDD principles.

    Attributes holding numpy arrays compare by shape and content.
    """

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, self.__class__):
            return False
        return _freeze(self) == _freeze(other)

    def __hash__(self) -> int:
        return hash(_freeze(self))

    def __repr__(self) -> str:
        attrs = ', '.join(f'{k}={v!r}' for k, v in self.__dict__.items() if not k.startswith('_'))
        return f'{self.__class__.__name__}({attrs})'
