from cdod.features.compatibility import compatibility
from cdod.features.config_parser import load_preset, load_presets, parse_config, read_config, require_valid
from cdod.features.semantic_config import (
    ConfigViolation,
    SemanticConfig,
    enumerate_valid,
    is_relaxation_of,
    print_config,
    validate,
)

__all__ = [
    "compatibility",
    "load_preset",
    "load_presets",
    "parse_config",
    "read_config",
    "require_valid",
    "ConfigViolation",
    "SemanticConfig",
    "enumerate_valid",
    "is_relaxation_of",
    "print_config",
    "validate",
]
