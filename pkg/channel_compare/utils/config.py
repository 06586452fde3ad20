"""Settings for solvers and commands, optionally loaded from a YAML file."""

from pathlib import Path
from typing import Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..core.exceptions import FormatError
from .logger import LOG_LEVELS, get_logger

logger = get_logger(__name__)


class Settings(BaseModel):
    """Defaults used wherever a command flag is not given."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    ui_tolerance: float = Field(1e-7, gt=0, description="Frank-Wolfe gap tolerance in bits")
    ui_max_iterations: int = Field(10000, ge=1)
    ui_method: str = Field("pairwise", pattern="^(pairwise|vanilla)$")
    heatmap_tolerance: float = Field(1e-5, gt=0)
    capacity_tolerance: float = Field(1e-9, gt=0)
    grid_resolution: int = Field(50, ge=1)
    sample_count: int = Field(2000, ge=0)
    seed: int = 0
    noise_epsilon: float = Field(0.01, ge=0, le=0.5)
    oracle_density: int = Field(100, ge=1)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _check_log_level(cls, value: str) -> str:
        if value.upper() not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {LOG_LEVELS}")
        return value.upper()


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """Read settings from ``path``; missing keys keep their defaults.

    Raises:
        FormatError: the file is not a YAML mapping of known keys.
    """
    if path is None:
        return Settings()

    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise FormatError(f"invalid YAML: {e}", path=str(path)) from e

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise FormatError("settings file must contain a mapping", path=str(path))

    try:
        settings = Settings(**data)
    except ValidationError as e:
        raise FormatError(f"invalid settings: {e}", path=str(path)) from e

    logger.debug(f"loaded settings from {path}: {settings.model_dump()}")
    return settings
