from functools import wraps
from pathlib import Path
import time

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

from src.shared.infrastructure.logger import get_logger


logger = get_logger(__name__)

# Dedicated registry; dumped to metrics.prom after a benchmark run.
registry = CollectorRegistry()


# =============================================================================
# SIMULATION METRICS
# =============================================================================

episodes_total = Counter(
    'episodes_total',
    'Total number of simulated episodes',
    ['algorithm', 'status'],
    registry=registry
)

episode_duration_seconds = Histogram(
    'episode_duration_seconds',
    'Wall-clock duration of one simulated episode',
    ['algorithm'],
    buckets=(0.01, 0.1, 0.5, 1.0, 5.0, 15.0, 60.0, 300.0, float('inf')),
    registry=registry
)

decisions_total = Counter(
    'decisions_total',
    'Total number of bandit decisions taken',
    ['algorithm'],
    registry=registry
)


# =============================================================================
# APPLICATION METRICS
# =============================================================================

application_errors_total = Counter(
    'application_errors_total',
    'Total number of application errors',
    ['error_type', 'component'],
    registry=registry
)

command_processing_total = Counter(
    'command_processing_total',
    'Total number of commands processed',
    ['command_type', 'status'],
    registry=registry
)

query_processing_total = Counter(
    'query_processing_total',
    'Total number of queries processed',
    ['query_type', 'status'],
    registry=registry
)


# =============================================================================
# HELPER FUNCTIONS
# =============================================================================

def record_episode(algorithm: str, status: str, duration: float = None, steps: int = 0):
    """Record episode metrics."""
    episodes_total.labels(algorithm=algorithm, status=status).inc()
    if duration is not None:
        episode_duration_seconds.labels(algorithm=algorithm).observe(duration)
    if steps:
        decisions_total.labels(algorithm=algorithm).inc(steps)


def record_application_error(error_type: str, component: str):
    """Record application error metrics."""
    application_errors_total.labels(
        error_type=error_type,
        component=component
    ).inc()


def record_command_processing(command_type: str, status: str):
    """Record command processing metrics."""
    command_processing_total.labels(
        command_type=command_type,
        status=status
    ).inc()


def record_query_processing(query_type: str, status: str):
    """Record query processing metrics."""
    query_processing_total.labels(
        query_type=query_type,
        status=status
    ).inc()


def write_metrics(path: Path) -> None:
    """Write the registry to a Prometheus textfile."""
    write_to_textfile(str(path), registry)
    logger.debug("metrics_written", path=str(path))


# =============================================================================
# DECORATORS
# =============================================================================

def monitor_command(command_type: str):
    """Decorator to monitor command processing."""
    def decorator(func):
        @wraps(func)
        async def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                result = await func(*args, **kwargs)
                record_command_processing(command_type, 'success')
                return result
            except Exception as e:
                record_command_processing(command_type, 'error')
                record_application_error(
                    error_type=type(e).__name__,
                    component='command_handler'
                )
                raise
            finally:
                logger.debug("command_finished", command_type=command_type,
                             seconds=round(time.perf_counter() - start_time, 3))
        return wrapper
    return decorator


def monitor_query(query_type: str):
    """Decorator to monitor query processing."""
    def decorator(func):
        @wraps(func)
        async def wrapper(*args, **kwargs):
            try:
                result = await func(*args, **kwargs)
                record_query_processing(query_type, 'success')
                return result
            except Exception as e:
                record_query_processing(query_type, 'error')
                record_application_error(
                    error_type=type(e).__name__,
                    component='query_handler'
                )
                raise
        return wrapper
    return decorator
