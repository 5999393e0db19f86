"""
The semantic domain: finite object models with typed objects, attribute
valuations and role-labelled links.
"""

from collections import Counter, defaultdict
from functools import cached_property
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from cdod.diagrams.ast import AttributeAssignment, LinkDecl, ObjDecl, ObjectDiagram, Value
from cdod.diagrams.printer import print_od


class ObjInstance(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    type_name: str = Field(description="Concrete CD class, or the tag of a class the CD omits")
    foreign: bool = Field(default=False, description="True for objects of classes the CD does not show")
    attributes: dict[str, Value] = Field(default_factory=dict)


class Link(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str
    role: str
    target: str


class ObjectModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    objects: tuple[ObjInstance, ...] = ()
    links: tuple[Link, ...] = ()

    @cached_property
    def by_id(self) -> dict[str, ObjInstance]:
        return {o.id: o for o in self.objects}

    @cached_property
    def partners(self) -> dict[tuple[str, str], frozenset[str]]:
        """(source id, role) -> target ids."""
        found: dict[tuple[str, str], set[str]] = defaultdict(set)
        for link in self.links:
            found[(link.source, link.role)].add(link.target)
        return {k: frozenset(v) for k, v in found.items()}

    @cached_property
    def roles_from(self) -> dict[str, frozenset[str]]:
        found: dict[str, set[str]] = defaultdict(set)
        for link in self.links:
            found[link.source].add(link.role)
        return {k: frozenset(v) for k, v in found.items()}

    @cached_property
    def triples(self) -> frozenset[tuple[str, str, str]]:
        return frozenset((l.source, l.role, l.target) for l in self.links)

    def targets(self, source: str, role: str) -> frozenset[str]:
        return self.partners.get((source, role), frozenset())

    def is_empty(self) -> bool:
        return not self.objects

    def renamed(self, names: dict[str, str]) -> "ObjectModel":
        """Rename objects; ids not in `names` keep their id unless it collides with a new name."""
        taken = set(names.values())
        mapping = dict(names)
        counter = 0
        for o in self.objects:
            if o.id in mapping:
                continue
            new = o.id
            while new in taken:
                counter += 1
                new = f"{o.id}_{counter}"
            mapping[o.id] = new
            taken.add(new)
        return ObjectModel(
            objects=tuple(o.model_copy(update={"id": mapping[o.id]}) for o in self.objects),
            links=tuple(
                Link(source=mapping[l.source], role=l.role, target=mapping[l.target]) for l in self.links
            ),
        )

    def to_object_diagram(self, name: str = "witness") -> ObjectDiagram:
        return ObjectDiagram(
            name=name,
            objects=tuple(
                ObjDecl(
                    name=o.id,
                    declared_type=o.type_name,
                    attributes=tuple(
                        AttributeAssignment(name=n, value=v) for n, v in sorted(o.attributes.items())
                    ),
                )
                for o in self.objects
            ),
            links=tuple(LinkDecl(source=l.source, role=l.role, target=l.target) for l in self.links),
        )

    def to_text(self, name: str = "witness") -> str:
        """Witness text: an object diagram with mandatory most specific types."""
        return print_od(self.to_object_diagram(name), witness=True)

    def summary(self) -> str:
        types = Counter(o.type_name for o in self.objects)
        parts = ", ".join(f"{n}x{t}" for t, n in sorted(types.items()))
        return f"{len(self.objects)} objects ({parts or 'none'}), {len(self.links)} links"


def om_well_formed(om: ObjectModel, reason: Optional[list[str]] = None) -> bool:
    """Distinct ids, existing link endpoints, no repeated link triple."""
    problems = []
    ids = Counter(o.id for o in om.objects)
    problems += [f"duplicate object id '{i}'" for i, n in ids.items() if n > 1]
    for link in om.links:
        for end in (link.source, link.target):
            if end not in ids:
                problems.append(f"link {link.source} {link.role} {link.target} has dangling endpoint '{end}'")
    triples = Counter((l.source, l.role, l.target) for l in om.links)
    problems += [f"duplicate link {' '.join(t)}" for t, n in triples.items() if n > 1]
    if reason is not None:
        reason.extend(problems)
    return not problems
