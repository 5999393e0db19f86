import json
import logging
from pathlib import Path

from lark import Lark, Transformer

from cdod.diagrams.parser import run_parser
from cdod.errors import ConfigError, Diagnostic, DiagramError
from cdod.features.semantic_config import SETTING_KEYS, SemanticConfig, validate

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).with_name("presets")

_parser = Lark(
    Path(__file__).with_name("config.lark").read_text(encoding="utf-8"),
    parser="lalr",
    propagate_positions=True,
    maybe_placeholders=False,
)

_BY_KEY = {key: (field, on, off) for field, (key, on, off) in SETTING_KEYS.items()}


class _ConfigTransformer(Transformer):
    def start(self, items):
        return json.loads(items[0]), items[1:]

    def setting(self, items):
        key, value = items
        return key, value


def parse_config(text: str) -> SemanticConfig:
    """
    Parse a configuration file. Every one of the nine settings must be given explicitly.

    The result is not checked against the cross-tree constraints; see require_valid.

    Raises:
        ConfigError: on syntax errors, unknown or repeated keys, missing keys and invalid values
    """
    try:
        name, settings = run_parser(_parser, text, _ConfigTransformer(), "configuration")
    except DiagramError as e:
        raise ConfigError(e.diagnostics) from None

    diagnostics: list[Diagnostic] = []
    values: dict[str, bool] = {}
    for key, value in settings:
        if str(key) not in _BY_KEY:
            diagnostics.append(Diagnostic.error(f"unknown key '{key}'", key.line, key.column))
            continue
        field, on, off = _BY_KEY[str(key)]
        if field in values:
            diagnostics.append(Diagnostic.error(f"key '{key}' is set twice", key.line, key.column))
            continue
        if str(value) not in (on, off):
            diagnostics.append(Diagnostic.error(
                f"invalid value '{value}' for {key}, expected {on} or {off}", value.line, value.column
            ))
            continue
        values[field] = str(value) == on
    for field, (key, _, _) in SETTING_KEYS.items():
        if field not in values and not any(str(k) == key for k, _ in settings):
            diagnostics.append(Diagnostic.error(f"missing key '{key}'"))
    if diagnostics:
        raise ConfigError(diagnostics)
    return SemanticConfig(name=name, **values)


def require_valid(config: SemanticConfig) -> SemanticConfig:
    """
    Raises:
        ConfigError: listing every violated cross-tree constraint
    """
    violations = validate(config)
    if violations:
        raise ConfigError([
            Diagnostic.error(f"constraint ({v.constraint_id}) violated: {v.message}") for v in violations
        ])
    return config


def read_config(path) -> SemanticConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def preset_names() -> list[str]:
    return sorted(p.stem for p in PRESET_DIR.glob("*.cfg"))


def load_preset(name: str) -> SemanticConfig:
    path = PRESET_DIR / f"{name}.cfg"
    if not path.is_file():
        raise ConfigError([Diagnostic.error(
            f"no preset named '{name}', available: {', '.join(preset_names())}"
        )])
    return require_valid(read_config(path))


def load_presets() -> dict[str, SemanticConfig]:
    presets = {name: load_preset(name) for name in preset_names()}
    logger.info("loaded %d preset configurations: %s", len(presets), ", ".join(presets))
    return presets
