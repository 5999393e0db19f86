"""
Search bounds for both engines and the calculation of an exhaustive scope
when the object diagram shows every object.
"""

import logging
from datetime import date, timedelta
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from cdod.config.analysis_config import AnalysisSettings
from cdod.diagrams.ast import PrimitiveType, Value
from cdod.diagrams.resolve import ResolvedCD, ResolvedPair
from cdod.errors import ScopeError
from cdod.features.semantic_config import SemanticConfig

logger = logging.getLogger(__name__)

_LITERAL_KIND = {
    PrimitiveType.INT.value: "int",
    PrimitiveType.STRING.value: "str",
    PrimitiveType.DATE.value: "date",
}


class ScopeOverrides(BaseModel):
    """User supplied bounds; anything left unset falls back to the computed scope."""

    per_class_max: dict[str, int] = Field(default_factory=dict)
    foreign_max: Optional[int] = Field(default=None, ge=0)
    max_objects: Optional[int] = Field(default=None, ge=0)
    value_domains: dict[str, tuple[Value, ...]] = Field(default_factory=dict)

    def bounds_objects(self) -> bool:
        return bool(self.per_class_max) or self.foreign_max is not None or self.max_objects is not None


class Scope(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_class_max: dict[str, int] = Field(default_factory=dict, description="Concrete class -> max objects")
    foreign_max: int = Field(default=0, ge=0, description="Max objects of classes the CD omits")
    max_objects: Optional[int] = Field(default=None, ge=0, description="Max objects in total, None for no bound")
    value_domains: dict[str, tuple[Value, ...]] = Field(
        default_factory=dict, description="Primitive type name -> candidate values"
    )

    @model_validator(mode="after")
    def _non_negative(self):
        negative = [c for c, n in self.per_class_max.items() if n < 0]
        if negative:
            raise ValueError(f"negative object bound for {', '.join(negative)}")
        return self

    def total_slots(self) -> int:
        return sum(self.per_class_max.values()) + self.foreign_max

    def bound(self) -> int:
        slots = self.total_slots()
        return slots if self.max_objects is None else min(slots, self.max_objects)

    def capped(self, max_objects: int) -> "Scope":
        """The same scope with every object bound at most `max_objects`."""
        return self.model_copy(update={
            "per_class_max": {c: min(n, max_objects) for c, n in self.per_class_max.items()},
            "foreign_max": min(self.foreign_max, max_objects),
            "max_objects": min(self.bound(), max_objects),
        })

    def describe(self) -> str:
        classes = ", ".join(f"{c}:{n}" for c, n in self.per_class_max.items())
        return f"{{{classes}, foreign:{self.foreign_max}}} max {self.max_objects}"


def candidate_classes(pair: ResolvedPair, config: SemanticConfig, od_object: str) -> tuple[str, ...]:
    """Concrete classes an OD object may be represented by under the typing mode."""
    status = pair.od_type_status[od_object]
    if status.kind == "untyped":
        return pair.concrete_classes
    if status.kind == "unknown":
        return ()
    if config.od_strict_typing:
        return (status.type_name,) if status.type_name in pair.concrete_classes else ()
    return pair.subclass_closure[status.type_name]


def _foreign_needed(pair: ResolvedPair, config: SemanticConfig) -> int:
    if config.cd_classes_complete:
        return 0
    return sum(1 for s in pair.od_type_status.values() if s.kind == "unknown")


def od_literals(pair: ResolvedPair) -> list[Value]:
    return list(dict.fromkeys(pair.od_values.values()))


def _fresh(type_name: str, taken: set, count: int) -> list[Value]:
    fresh: list[Value] = []
    i = 0
    while len(fresh) < count:
        if type_name == PrimitiveType.INT.value:
            candidate = Value.int_(i)
        elif type_name == PrimitiveType.STRING.value:
            candidate = Value.str_(f"s{i}")
        else:
            candidate = Value.date((date(2000, 1, 1) + timedelta(days=i)).isoformat())
        if candidate.data not in taken:
            fresh.append(candidate)
        i += 1
    return fresh


def value_domains(rcd: ResolvedCD, literals: list[Value], fresh_per_type: dict[str, int]) -> dict[str, tuple[Value, ...]]:
    """
    Candidate values per primitive type: the literals of that kind plus fresh ones,
    at least one fresh value even for a type no attribute uses.

    Attribute values are only ever compared with OD literals and checked for their
    type, so any value not shown is interchangeable with a fresh one.
    """
    domains = {}
    for type_name, kind in _LITERAL_KIND.items():
        shown = [v for v in literals if v.kind == kind]
        taken = {v.data for v in literals if v.kind in ("str", "date", "int")}
        domains[type_name] = tuple(shown + _fresh(type_name, taken, max(1, fresh_per_type.get(type_name, 0))))
    domains[PrimitiveType.BOOLEAN.value] = (Value.bool_(False), Value.bool_(True))
    for enum in rcd.cd.enums:
        domains[enum.name] = tuple(Value.enum_(enum.name, lit) for lit in enum.literals)
    return domains


def _attributes_per_type(rcd: ResolvedCD) -> dict[str, int]:
    names: dict[str, set[str]] = {}
    for attributes in rcd.flattened_attributes.values():
        for attribute in attributes:
            names.setdefault(attribute.type.name, set()).add(attribute.name)
    return {t: len(n) for t, n in names.items()}


def _merge_domains(base: dict[str, tuple[Value, ...]], extra: dict[str, tuple[Value, ...]]) -> dict[str, tuple[Value, ...]]:
    merged = dict(base)
    for type_name, values in extra.items():
        merged[type_name] = tuple(dict.fromkeys(merged.get(type_name, ()) + tuple(values)))
    return merged


def _apply(base: Scope, overrides: ScopeOverrides, config: SemanticConfig) -> Scope:
    return Scope(
        per_class_max={c: overrides.per_class_max.get(c, n) for c, n in base.per_class_max.items()},
        foreign_max=0 if config.cd_classes_complete else (
            overrides.foreign_max if overrides.foreign_max is not None else base.foreign_max
        ),
        max_objects=overrides.max_objects if overrides.max_objects is not None else base.max_objects,
        value_domains=_merge_domains(base.value_domains, overrides.value_domains),
    )


def can_host(pair: ResolvedPair, config: SemanticConfig, scope: Scope) -> bool:
    """
    True iff the OD objects fit into the scope's object bounds simultaneously.

    Objects no class can represent (an unknown type under classes=complete, an
    abstract type under strict typing) are ignored: no scope hosts them.
    """
    if scope.max_objects is not None and scope.max_objects < len(pair.od_objects):
        return False
    capacity = dict(scope.per_class_max)
    capacity["\0foreign"] = scope.foreign_max
    options = {}
    for o in pair.od_objects:
        status = pair.od_type_status[o]
        classes = list(candidate_classes(pair, config, o))
        if status.kind in ("unknown", "untyped") and not config.cd_classes_complete:
            classes.append("\0foreign")
        if classes:
            options[o] = [c for c in classes if capacity.get(c, 0) > 0]

    assigned: dict[str, list[str]] = {c: [] for c in capacity}

    def place(o: str, seen: set) -> bool:
        for c in options[o]:
            if c in seen:
                continue
            seen.add(c)
            if len(assigned[c]) < capacity[c]:
                assigned[c].append(o)
                return True
            for other in list(assigned[c]):
                assigned[c].remove(other)
                assigned[c].append(o)
                if place(other, seen):
                    return True
                assigned[c].remove(o)
                assigned[c].append(other)
        return False

    return all(place(o, set()) for o in options)


def compute_scope(
    pair: ResolvedPair,
    config: SemanticConfig,
    settings: Optional[AnalysisSettings] = None,
    user_scope: Optional[ScopeOverrides] = None,
) -> tuple[Scope, bool]:
    """
    Compute the search scope and whether it is exhaustive.

    When the OD shows every object the scope is derived from the OD alone and covers
    every candidate; a user scope may then only add attribute values. Otherwise the
    user scope (or the configured default) is used and the verdict can only be
    CONSISTENT or UNKNOWN_WITHIN_SCOPE.

    Raises:
        ScopeError: when the user scope cannot host the objects the OD declares
    """
    settings = settings or AnalysisSettings()
    literals = od_literals(pair)
    n_od = len(pair.od_objects)
    needed = {c: 0 for c in pair.concrete_classes}
    for o in pair.od_objects:
        for c in candidate_classes(pair, config, o):
            needed[c] += 1

    if config.od_objects_complete:
        fresh = {t: max(1, n) for t, n in _attributes_per_type(pair).items()}
        scope = Scope(
            per_class_max=needed,
            foreign_max=_foreign_needed(pair, config),
            max_objects=n_od,
            value_domains=value_domains(pair, literals, fresh),
        )
        if user_scope is not None:
            requested = _apply(scope, user_scope, config)
            if not can_host(pair, config, requested):
                raise ScopeError(f"scope {requested.describe()} cannot host the {n_od} objects of {pair.od.name}")
            if user_scope.bounds_objects():
                logger.warning("od.objects=complete: object bounds of the given scope are ignored")
            scope = scope.model_copy(update={
                "value_domains": _merge_domains(scope.value_domains, user_scope.value_domains)
            })
        exhaustive = True
    else:
        fresh = {t: settings.default_fresh_values for t in _LITERAL_KIND}
        default = Scope(
            per_class_max={c: max(settings.default_objects_per_class, needed[c]) for c in pair.concrete_classes},
            foreign_max=0 if config.cd_classes_complete else max(1, _foreign_needed(pair, config)),
            max_objects=max(settings.default_max_objects, n_od),
            value_domains=value_domains(pair, literals, fresh),
        )
        scope = default
        if user_scope is not None:
            scope = _apply(default, user_scope, config)
            if not can_host(pair, config, scope):
                raise ScopeError(f"scope {scope.describe()} cannot host the {n_od} objects of {pair.od.name}")
        exhaustive = False

    logger.info("scope %s, exhaustive=%s", scope.describe(), exhaustive)
    return scope, exhaustive
