"""
Name resolution: the tables every semantic consumer (membership predicates,
engines, Alloy emitter) reads instead of walking the raw AST.
"""

import logging
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from cdod.diagrams.ast import (
    AssocKind,
    AttributeDecl,
    AttrType,
    ClassDecl,
    ClassDiagram,
    LinkDecl,
    Multiplicity,
    ObjectDiagram,
    PrimitiveType,
    Value,
)
from cdod.errors import Diagnostic, DiagramError

logger = logging.getLogger(__name__)

Direction = Literal["leftToRight", "rightToLeft"]


class RoleInfo(BaseModel):
    """One direction of an association, seen from the class the links leave."""

    model_config = ConfigDict(frozen=True)

    assoc_index: int
    kind: AssocKind
    direction: Direction
    role: str
    source: str
    target: str
    out_mult: Multiplicity
    in_mult: Multiplicity
    navigable: bool
    bidirectional: bool
    reverse_role: str
    whole_to_part: bool


class ObjTypeStatus(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["resolved", "unknown", "untyped"]
    type_name: Optional[str] = None


class ResolvedCD(BaseModel):
    """Class diagram tables that do not depend on an object diagram."""

    model_config = ConfigDict(frozen=True)

    cd: ClassDiagram
    concrete_classes: tuple[str, ...]
    subclass_closure: dict[str, tuple[str, ...]]
    descendants: dict[str, tuple[str, ...]]
    flattened_attributes: dict[str, tuple[AttributeDecl, ...]]
    role_table: dict[tuple[str, str], RoleInfo]
    directions: tuple[RoleInfo, ...]

    def is_type(self, name: str) -> bool:
        return name in self.subclass_closure

    def attribute_type(self, cls: str, name: str) -> Optional[AttrType]:
        for attribute in self.flattened_attributes.get(cls, ()):
            if attribute.name == name:
                return attribute.type
        return None

    def outgoing_roles(self, cls: str) -> tuple[RoleInfo, ...]:
        """Navigable roles an object of `cls` may hold links under, in declaration order."""
        return tuple(
            info for info in self.directions
            if info.navigable and cls in self.descendants[info.source]
        )

    def role_from(self, cls: str, role: str) -> Optional[RoleInfo]:
        info = self.role_table.get((cls, role))
        return info if info is not None and info.navigable else None

    def singleton_classes(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.cd.classes if c.is_singleton)

    def enum_literals(self, name: str) -> tuple[str, ...]:
        enum = self.cd.enum_named(name)
        return enum.literals if enum is not None else ()

    def admits(self, attr_type: AttrType, value: Value) -> bool:
        """Type membership with enumeration values restricted to the declared literals."""
        literals = self.enum_literals(attr_type.enum) if attr_type.enum is not None else None
        return attr_type.accepts(value, literals)


class ResolvedPair(ResolvedCD):
    """A class diagram and an object diagram resolved against each other."""

    od: ObjectDiagram
    od_type_status: dict[str, ObjTypeStatus]
    unknown_types: tuple[str, ...]
    shown_links: tuple[LinkDecl, ...]
    od_values: dict[tuple[str, str], Value]

    @property
    def od_objects(self) -> tuple[str, ...]:
        return tuple(o.name for o in self.od.objects)

    def shown_roles(self, obj: str) -> tuple[str, ...]:
        return tuple(dict.fromkeys(link.role for link in self.shown_links if link.source == obj))

    def shown_partners(self, obj: str, role: str) -> tuple[str, ...]:
        return tuple(dict.fromkeys(
            link.target for link in self.shown_links if link.source == obj and link.role == role
        ))


def _children(cd: ClassDiagram) -> dict[str, list[str]]:
    children: dict[str, list[str]] = {name: [] for name in _type_names(cd)}
    for c in cd.classes:
        if c.superclass:
            children[c.superclass].append(c.name)
        for iface in c.interfaces:
            children[iface].append(c.name)
    for iface in cd.interfaces:
        for parent in iface.extends:
            children[parent].append(iface.name)
    return children


def _type_names(cd: ClassDiagram) -> list[str]:
    return [c.name for c in cd.classes] + [i.name for i in cd.interfaces]


def _flatten(cls: ClassDecl, classes: dict[str, ClassDecl]) -> tuple[AttributeDecl, ...]:
    attributes: dict[str, AttributeDecl] = {}
    current: Optional[ClassDecl] = cls
    while current is not None:
        for attribute in current.attributes:
            attributes.setdefault(attribute.name, attribute)
        current = classes.get(current.superclass) if current.superclass else None
    return tuple(attributes.values())


def _directions(cd: ClassDiagram) -> list[RoleInfo]:
    found = []
    for index, a in enumerate(cd.associations):
        bidirectional = a.navigability == "both"
        found.append(RoleInfo(
            assoc_index=index, kind=a.kind, direction="leftToRight", role=a.right_role,
            source=a.left_class, target=a.right_class, out_mult=a.right_mult, in_mult=a.left_mult,
            navigable=a.navigability in ("leftToRight", "both"), bidirectional=bidirectional,
            reverse_role=a.left_role, whole_to_part=a.kind == "composition",
        ))
        found.append(RoleInfo(
            assoc_index=index, kind=a.kind, direction="rightToLeft", role=a.left_role,
            source=a.right_class, target=a.left_class, out_mult=a.left_mult, in_mult=a.right_mult,
            navigable=a.navigability in ("rightToLeft", "both"), bidirectional=bidirectional,
            reverse_role=a.right_role, whole_to_part=False,
        ))
    return found


def resolve_cd(cd: ClassDiagram) -> ResolvedCD:
    """
    Compute subclass closures, flattened attributes and the role table of a class diagram.

    Raises:
        DiagramError: when two associations give one class the same role name
    """
    classes = {c.name: c for c in cd.classes}
    children = _children(cd)

    descendants: dict[str, tuple[str, ...]] = {}
    for name in _type_names(cd):
        seen = {name}
        stack = [name]
        while stack:
            for child in children[stack.pop()]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        descendants[name] = tuple(n for n in _type_names(cd) if n in seen)

    concrete = tuple(c.name for c in cd.classes if not c.is_abstract)
    closure = {name: tuple(n for n in concrete if n in descendants[name]) for name in descendants}
    flattened = {c.name: _flatten(c, classes) for c in cd.classes}

    directions = _directions(cd)
    role_table: dict[tuple[str, str], RoleInfo] = {}
    diagnostics: list[Diagnostic] = []
    for info in directions:
        for holder in descendants.get(info.source, ()):
            key = (holder, info.role)
            clash = role_table.get(key)
            if clash is not None and (clash.assoc_index, clash.direction) != (info.assoc_index, info.direction):
                diagnostics.append(Diagnostic.error(
                    f"role name '{info.role}' is used twice for class {holder} "
                    f"(associations {clash.assoc_index + 1} and {info.assoc_index + 1})"
                ))
                continue
            role_table[key] = info
    for c in cd.classes:
        for attribute in flattened[c.name]:
            if (c.name, attribute.name) in role_table and role_table[(c.name, attribute.name)].navigable:
                diagnostics.append(Diagnostic.error(
                    f"role name '{attribute.name}' of class {c.name} clashes with an attribute"
                ))
    if diagnostics:
        raise DiagramError(diagnostics, "class diagram")

    return ResolvedCD(
        cd=cd,
        concrete_classes=concrete,
        subclass_closure=closure,
        descendants=descendants,
        flattened_attributes=flattened,
        role_table=role_table,
        directions=tuple(directions),
    )


def _link_direction(rcd: ResolvedCD, status: ObjTypeStatus, role: str) -> Optional[RoleInfo]:
    if status.kind == "resolved":
        return rcd.role_from(status.type_name, role)
    if status.kind == "untyped":
        candidates = {(i.assoc_index, i.direction): i for i in rcd.directions if i.navigable and i.role == role}
        if len(candidates) == 1:
            return next(iter(candidates.values()))
    return None


def resolve(cd: ClassDiagram, od: ObjectDiagram) -> ResolvedPair:
    """
    Resolve an object diagram against a class diagram.

    OD type names absent from the class diagram are classified as unknown, never
    rejected: whether they are admissible depends on the semantic configuration.

    Raises:
        DiagramError: when a Date attribute of a typed object is given a text that is
            not a calendar date
    """
    rcd = resolve_cd(cd)

    status: dict[str, ObjTypeStatus] = {}
    unknown: list[str] = []
    for o in od.objects:
        if o.declared_type is None:
            status[o.name] = ObjTypeStatus(kind="untyped")
        elif rcd.is_type(o.declared_type):
            status[o.name] = ObjTypeStatus(kind="resolved", type_name=o.declared_type)
        else:
            status[o.name] = ObjTypeStatus(kind="unknown", type_name=o.declared_type)
            if o.declared_type not in unknown:
                unknown.append(o.declared_type)

    shown = list(od.links)
    present = {(l.source, l.role, l.target) for l in shown}
    for link in od.links:
        info = _link_direction(rcd, status[link.source], link.role)
        if info is None or not info.bidirectional:
            continue
        reverse = (link.target, info.reverse_role, link.source)
        if reverse not in present:
            present.add(reverse)
            shown.append(LinkDecl(source=link.target, role=info.reverse_role, target=link.source))

    values: dict[tuple[str, str], Value] = {}
    bad_dates: list[Diagnostic] = []
    for o in od.objects:
        s = status[o.name]
        for assignment in o.attributes:
            value = assignment.value
            if s.kind == "resolved":
                declared = rcd.attribute_type(s.type_name, assignment.name)
                if declared is not None:
                    value = declared.coerce(value)
                    if declared.primitive == PrimitiveType.DATE and value.kind == "str":
                        bad_dates.append(Diagnostic.error(
                            f"{o.name}.{assignment.name} = \"{value.data}\" is not a valid Date (expected YYYY-MM-DD)"
                        ))
            values[(o.name, assignment.name)] = value
    if bad_dates:
        raise DiagramError(bad_dates, "object diagram")

    pair = ResolvedPair(
        **dict(rcd),
        od=od,
        od_type_status=status,
        unknown_types=tuple(unknown),
        shown_links=tuple(shown),
        od_values=values,
    )
    logger.debug(
        "resolved %s/%s: %d concrete classes, %d roles, %d shown links (%d derived), unknown types %s",
        cd.name, od.name, len(rcd.concrete_classes), len(rcd.role_table), len(shown),
        len(shown) - len(od.links), list(unknown),
    )
    return pair
