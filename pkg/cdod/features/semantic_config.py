"""
The semantic variability model of CD/OD semantics: nine binary choices and
three cross-tree constraints, which together admit 144 configurations.
"""

import json
from itertools import product
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

FLAG_NAMES = (
    "cd_empty_om_invalid",
    "cd_attributes_complete",
    "cd_classes_complete",
    "od_empty_om_invalid",
    "od_objects_complete",
    "od_links_complete",
    "od_attributes_complete",
    "od_types_complete",
    "od_strict_typing",
)


class SemanticConfig(BaseModel):
    """One valuation of the nine semantic choices. Field order is the canonical order."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(default="", description="Display name, not part of the identity")
    cd_empty_om_invalid: bool = Field(description="The empty object model is not an instance of the CD")
    cd_attributes_complete: bool = Field(description="Objects carry no attributes beyond those of their class")
    cd_classes_complete: bool = Field(description="Every object is an instance of a class shown in the CD")
    od_empty_om_invalid: bool = Field(description="The empty object model is not an instance of the OD")
    od_objects_complete: bool = Field(description="The OD shows every object")
    od_links_complete: bool = Field(description="The OD shows every link of its objects")
    od_attributes_complete: bool = Field(description="The OD shows every attribute of its objects")
    od_types_complete: bool = Field(description="Every OD object has a type")
    od_strict_typing: bool = Field(description="Shown types are exact rather than upper bounds")

    @property
    def flags(self) -> tuple[bool, ...]:
        return tuple(getattr(self, n) for n in FLAG_NAMES)

    @property
    def key(self) -> str:
        """Nine-character bit string in canonical field order; identifies the configuration."""
        return "".join("1" if f else "0" for f in self.flags)

    @property
    def label(self) -> str:
        return self.name or f"cfg-{self.key}"

    @classmethod
    def from_flags(cls, flags, name: str = "") -> "SemanticConfig":
        return cls(name=name, **dict(zip(FLAG_NAMES, flags)))

    @classmethod
    def from_key(cls, key: str, name: str = "") -> "SemanticConfig":
        if len(key) != len(FLAG_NAMES) or set(key) - {"0", "1"}:
            raise ValueError(f"configuration key must be {len(FLAG_NAMES)} binary digits, got {key!r}")
        return cls.from_flags((c == "1" for c in key), name=name)

    def with_flags(self, **changes: bool) -> "SemanticConfig":
        return self.model_copy(update=changes)


class ConfigViolation(BaseModel):
    constraint_id: Literal[1, 2, 3]
    message: str


def validate(config: SemanticConfig) -> list[ConfigViolation]:
    """Return the violated cross-tree constraints; empty iff the configuration is valid."""
    violations = []
    if not config.cd_classes_complete and not config.od_types_complete:
        violations.append(ConfigViolation(
            constraint_id=1,
            message="cd.classes=incomplete and od.types=incomplete cannot be combined "
                    "(untyped objects could then belong to any class)",
        ))
    if not config.od_objects_complete and config.od_links_complete:
        violations.append(ConfigViolation(
            constraint_id=2,
            message="od.objects=incomplete requires od.links=incomplete "
                    "(links to omitted objects cannot be shown)",
        ))
    if config.cd_empty_om_invalid != config.od_empty_om_invalid:
        violations.append(ConfigViolation(
            constraint_id=3,
            message="cd.emptyOM and od.emptyOM must agree",
        ))
    return violations


def is_valid(config: SemanticConfig) -> bool:
    return not validate(config)


def all_valuations() -> list[SemanticConfig]:
    """All 2^9 raw valuations, valid or not, in canonical order."""
    return [SemanticConfig.from_flags(flags) for flags in product((False, True), repeat=len(FLAG_NAMES))]


def enumerate_valid() -> list[SemanticConfig]:
    return [
        c.model_copy(update={"name": f"cfg-{c.key}"})
        for c in all_valuations()
        if is_valid(c)
    ]


def is_relaxation_of(relaxed: SemanticConfig, strict: SemanticConfig) -> bool:
    """
    True iff `relaxed` is pointwise at least as permissive as `strict`.

    Every flag is a restriction when set, so relaxing means only ever unsetting flags.
    """
    return all(s or not r for r, s in zip(relaxed.flags, strict.flags))


SETTING_KEYS = {
    "cd_empty_om_invalid": ("cd.emptyOM", "invalid", "valid"),
    "cd_attributes_complete": ("cd.attributes", "complete", "incomplete"),
    "cd_classes_complete": ("cd.classes", "complete", "incomplete"),
    "od_empty_om_invalid": ("od.emptyOM", "invalid", "valid"),
    "od_objects_complete": ("od.objects", "complete", "incomplete"),
    "od_links_complete": ("od.links", "complete", "incomplete"),
    "od_attributes_complete": ("od.attributes", "complete", "incomplete"),
    "od_types_complete": ("od.types", "complete", "incomplete"),
    "od_strict_typing": ("od.typing", "strict", "nonstrict"),
}


def print_config(config: SemanticConfig) -> str:
    lines = [f"config {json.dumps(config.label)} {{"]
    for field, (key, on, off) in SETTING_KEYS.items():
        lines.append(f"  {key} = {on if getattr(config, field) else off};")
    lines.append("}")
    return "\n".join(lines) + "\n"
