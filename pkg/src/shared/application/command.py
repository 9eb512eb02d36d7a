from abc import ABC, abstractmethod
from typing import Any, Generic, TypeVar

from pydantic import BaseModel, ConfigDict


class Command(BaseModel, ABC):
    """Base class for commands in CQRS pattern."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


C = TypeVar('C', bound=Command)


class CommandHandler(Generic[C], ABC):
    """Base class for command handlers."""

    @abstractmethod
    async def handle(self, command: C) -> Any:
        """Handle the command and return result."""
