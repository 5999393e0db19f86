import json
import logging
import os
from pathlib import Path
from typing import Dict, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator
from pysat.solvers import SolverNames

from cdod.errors import ConfigError, Diagnostic

logger = logging.getLogger(__name__)

CONFLICT_LIMIT_ENV = "CDOD_CONFLICT_LIMIT"


class AnalysisSettings(BaseModel):
    """Tool settings read from config.json."""

    solver: str = Field(default="glucose3", description="pysat solver name")
    conflict_limit: int = Field(default=1_000_000, ge=1, description="Conflicts before a SAT call gives up")
    default_objects_per_class: int = Field(default=3, ge=0, description="Default per-class bound for open scopes")
    default_fresh_values: int = Field(default=2, ge=1, description="Fresh values per type for open scopes")
    default_max_objects: int = Field(default=6, ge=0, description="Default total object bound for open scopes")
    sweep_workers: Optional[int] = Field(default=None, ge=1, description="Sweep processes, None for all cores")
    enum_max_objects: int = Field(default=6, ge=0, description="Object cap for the enumeration oracle")

    @field_validator("solver")
    @classmethod
    def _known_solver(cls, value: str) -> str:
        known = {alias for names in vars(SolverNames).values() if isinstance(names, tuple) for alias in names}
        if value not in known:
            raise ValueError(f"unknown solver '{value}'")
        return value


class AnalysisConfig:
    def __init__(self, config_path: str = "config.json"):
        self.config_path = config_path
        self._config = self._load_config()

    def _load_config(self) -> Dict:
        """Load the "analysis" section of the JSON file; a missing file means defaults."""
        path = Path(self.config_path)
        if not path.is_file():
            logger.debug("no %s, using built-in analysis settings", self.config_path)
            return {}
        with open(path, "r") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError([Diagnostic.error(f"{self.config_path} is not valid JSON: {e.msg}", e.lineno, e.colno)])
        return data.get("analysis", {})

    def get_settings(self) -> AnalysisSettings:
        """Validated settings with environment overrides applied."""
        values = dict(self._config)
        limit = os.getenv(CONFLICT_LIMIT_ENV)
        if limit is not None:
            try:
                values["conflict_limit"] = int(limit)
            except ValueError:
                raise ConfigError([Diagnostic.error(f"{CONFLICT_LIMIT_ENV} must be an integer, got '{limit}'")])
        try:
            return AnalysisSettings(**values)
        except ValidationError as e:
            raise ConfigError([
                Diagnostic.error(f"{self.config_path}: {'.'.join(map(str, err['loc']))}: {err['msg']}")
                for err in e.errors()
            ])
