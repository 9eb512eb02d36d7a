from abc import ABC, abstractmethod
from typing import Generic, TypeVar

from pydantic import BaseModel, ConfigDict


class Query(BaseModel, ABC):
    """Base class for queries in CQRS pattern."""

    model_config = ConfigDict(frozen=True)


Q = TypeVar('Q', bound=Query)
R = TypeVar('R')


class QueryHandler(Generic[Q, R], ABC):
    """Base class for query handlers."""

    @abstractmethod
    async def handle(self, query: Q) -> R:
        """Handle the query and return result."""
