"""
The reduced candidate space shared by both engines.

Objects live in slots: a fixed number of slots per concrete class, named after the
class (emp_0, emp_1, ...), plus foreign slots for objects of classes the CD omits.
Slots of one class are interchangeable, so a model using k of them uses the first k.

Reductions, each preserving the verdict:
  * attribute values are only compared with OD literals, so an attribute draws from
    the values the OD shows for its name plus a single value not shown;
  * attributes beyond the class's own (cd.attributes=incomplete) and attributes of
    foreign objects only matter when the OD shows them, with a shown value;
  * links of foreign objects only matter under roles the OD shows for their type.
"""

import logging
from typing import Optional

from pydantic import BaseModel, ConfigDict

from cdod.diagrams.ast import AttrType, Value
from cdod.diagrams.resolve import ResolvedPair, RoleInfo
from cdod.engines.scope import Scope
from cdod.features.semantic_config import SemanticConfig

logger = logging.getLogger(__name__)

OTHER_TAG = "Omitted"


class Slot(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    cls: Optional[str] = None
    index: int

    @property
    def foreign(self) -> bool:
        return self.cls is None


class AttrChoice(BaseModel):
    """Values an attribute of a slot may take; optional attributes may also be absent."""

    model_config = ConfigDict(frozen=True)

    name: str
    values: tuple[Value, ...]
    optional: bool = False


class LinkFamily(BaseModel):
    """Candidate targets of the links a slot may hold under one role."""

    model_config = ConfigDict(frozen=True)

    role: str
    targets: tuple[str, ...]
    info: Optional[RoleInfo] = None
    tags: tuple[str, ...] = ()


class CandidateSpace(BaseModel):
    model_config = ConfigDict(frozen=True)

    slots: tuple[Slot, ...]
    tags: tuple[str, ...]
    max_objects: int
    attributes: dict[str, tuple[AttrChoice, ...]]
    links: dict[str, tuple[LinkFamily, ...]]

    def class_slots(self, cls: str) -> tuple[Slot, ...]:
        return tuple(s for s in self.slots if s.cls == cls)

    def foreign_slots(self) -> tuple[Slot, ...]:
        return tuple(s for s in self.slots if s.foreign)


def slot_prefix(cls: str) -> str:
    return cls.lower()


def _shown_values(pair: ResolvedPair, name: str) -> list[Value]:
    return list(dict.fromkeys(v for (_, n), v in pair.od_values.items() if n == name))


def _attribute_values(pair: ResolvedPair, scope: Scope, name: str, attr_type: AttrType) -> tuple[Value, ...]:
    domain = scope.value_domains.get(attr_type.name, ())
    if attr_type.enum is not None:
        domain = tuple(Value.enum_(attr_type.enum, lit) for lit in pair.enum_literals(attr_type.enum))
    shown = []
    for value in _shown_values(pair, name):
        value = attr_type.coerce(value)
        if pair.admits(attr_type, value) and value not in shown:
            shown.append(value)
    other = [v for v in domain if not any(v.matches(s) for s in shown)]
    return tuple(shown + other[:1])


def _foreign_tag_roles(pair: ResolvedPair, other_tag: str) -> dict[str, tuple[str, ...]]:
    """Roles a foreign object may hold links under, per tag; untyped sources use the other tag."""
    roles: dict[str, dict[str, None]] = {tag: {} for tag in pair.unknown_types + (other_tag,)}
    for link in pair.shown_links:
        status = pair.od_type_status[link.source]
        if status.kind == "unknown":
            roles[status.type_name][link.role] = None
        elif status.kind == "untyped":
            roles[other_tag][link.role] = None
    return {tag: tuple(r) for tag, r in roles.items()}


def build_space(pair: ResolvedPair, config: SemanticConfig, scope: Scope) -> CandidateSpace:
    slots: list[Slot] = []
    prefixes = {"foreign"}
    for cls in pair.concrete_classes:
        prefix = slot_prefix(cls)
        while prefix in prefixes:
            prefix += "_"
        prefixes.add(prefix)
        for i in range(scope.per_class_max.get(cls, 0)):
            slots.append(Slot(id=f"{prefix}_{i}", cls=cls, index=i))
    foreign_max = 0 if config.cd_classes_complete else scope.foreign_max
    for i in range(foreign_max):
        slots.append(Slot(id=f"foreign_{i}", index=i))

    other_tag = OTHER_TAG
    while other_tag in pair.unknown_types or pair.is_type(other_tag):
        other_tag += "_"
    tags = pair.unknown_types + (other_tag,)

    shown_names = list(dict.fromkeys(n for (_, n) in pair.od_values))
    per_class: dict[str, tuple[AttrChoice, ...]] = {}
    for cls in pair.concrete_classes:
        declared = pair.flattened_attributes[cls]
        choices = [
            AttrChoice(name=a.name, values=_attribute_values(pair, scope, a.name, a.type))
            for a in declared
        ]
        if not config.cd_attributes_complete:
            own = {a.name for a in declared}
            choices += [
                AttrChoice(name=n, values=tuple(_shown_values(pair, n)), optional=True)
                for n in shown_names if n not in own
            ]
        per_class[cls] = tuple(choices)
    foreign_choices = tuple(
        AttrChoice(name=n, values=tuple(_shown_values(pair, n)), optional=True) for n in shown_names
    )

    tag_roles = _foreign_tag_roles(pair, other_tag)
    foreign_roles = list(dict.fromkeys(r for roles in tag_roles.values() for r in roles))
    all_ids = tuple(s.id for s in slots)

    attributes: dict[str, tuple[AttrChoice, ...]] = {}
    links: dict[str, tuple[LinkFamily, ...]] = {}
    for s in slots:
        if s.foreign:
            attributes[s.id] = foreign_choices
            links[s.id] = tuple(
                LinkFamily(
                    role=r,
                    targets=all_ids,
                    tags=tuple(t for t, roles in tag_roles.items() if r in roles),
                )
                for r in foreign_roles
            )
            continue
        attributes[s.id] = per_class[s.cls]
        families = []
        for info in pair.outgoing_roles(s.cls):
            targets = tuple(
                t.id for t in slots if not t.foreign and t.cls in pair.subclass_closure[info.target]
            )
            families.append(LinkFamily(role=info.role, targets=targets, info=info))
        links[s.id] = tuple(families)

    space = CandidateSpace(
        slots=tuple(slots),
        tags=tags,
        max_objects=min(len(slots), scope.max_objects) if scope.max_objects is not None else len(slots),
        attributes=attributes,
        links=links,
    )
    logger.debug(
        "candidate space: %d slots (%d foreign), max %d objects",
        len(slots), foreign_max, space.max_objects,
    )
    return space
