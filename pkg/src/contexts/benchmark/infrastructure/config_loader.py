import json
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from pydantic import ValidationError as PydanticValidationError

from src.shared.domain.exceptions import ConfigurationError, NotFoundError
from src.contexts.simulation.application.dtos import ExperimentConfig


def _format_errors(error: PydanticValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "config"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def validate_config(data: Any) -> ExperimentConfig:
    """Validate raw data into an ExperimentConfig, naming the failing key on error."""
    try:
        return ExperimentConfig.model_validate(data)
    except PydanticValidationError as e:
        raise ConfigurationError(f"Invalid experiment config: {_format_errors(e)}") from e


def parse_config(path: Path) -> ExperimentConfig:
    """Read a JSON experiment file and resolve every default."""
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"Config file {path} does not exist")
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise ConfigurationError(f"Config file {path} is empty")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Config file {path} is not valid JSON: {e}") from e
    return validate_config(data)


def apply_overrides(
    config: ExperimentConfig,
    seed: Optional[int] = None,
    replicates: Optional[int] = None,
    algorithms: Optional[Sequence[str]] = None,
) -> ExperimentConfig:
    """Re-validate the config with command-line overrides applied."""
    data: Dict[str, Any] = config.model_dump(mode="json")
    if seed is not None:
        data["seed"] = seed
    if replicates is not None:
        data["replicates"] = replicates
    if algorithms:
        configured = {entry["name"]: entry for entry in data["algorithms"]}
        data["algorithms"] = [configured.get(name, {"name": name}) for name in algorithms]
    return validate_config(data)
