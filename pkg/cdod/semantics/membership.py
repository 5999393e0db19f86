"""
Configuration-parametrized membership predicates om ∈ sem(cd) and om ∈ sem(od).

These are the executable definition of the semantics: both engines are
judged against them and every witness is re-checked with them.
"""

from collections import Counter
from typing import Iterator, Optional

from cdod.diagrams.resolve import ResolvedCD, ResolvedPair
from cdod.features.semantic_config import SemanticConfig
from cdod.semantics.object_model import ObjInstance, ObjectModel


def cd_violations(
    om: ObjectModel, rcd: ResolvedCD, config: SemanticConfig, check_links: bool = True
) -> Iterator[str]:
    """
    Yield a description of every CD clause the object model breaks.

    With check_links=False only the clauses about objects and attribute values are checked.
    """
    if config.cd_empty_om_invalid and om.is_empty():
        yield "the empty object model is excluded (emptyOM=invalid)"

    typed: dict[str, ObjInstance] = {}
    for o in om.objects:
        if o.foreign:
            if config.cd_classes_complete:
                yield f"{o.id} is of class {o.type_name}, which the CD does not show (classes=complete)"
            continue
        if o.type_name not in rcd.concrete_classes:
            yield f"{o.id} has type {o.type_name}, which is not a concrete class"
            continue
        typed[o.id] = o
        declared = {a.name: a.type for a in rcd.flattened_attributes[o.type_name]}
        for name, attr_type in declared.items():
            value = o.attributes.get(name)
            if value is None:
                yield f"{o.id} lacks attribute {name}"
            elif not rcd.admits(attr_type, value):
                yield f"{o.id}.{name} = {value} is not a value of type {attr_type}"
        if config.cd_attributes_complete:
            for name in o.attributes:
                if name not in declared:
                    yield f"{o.id} carries attribute {name} not declared by {o.type_name} (attributes=complete)"

    if not check_links:
        yield from _singleton_violations(om, rcd, typed)
        return

    incoming: Counter = Counter()
    wholes: Counter = Counter()
    for link in om.links:
        source = typed.get(link.source)
        if source is None:
            continue
        info = rcd.role_from(source.type_name, link.role)
        if info is None:
            yield f"{link.source} ({source.type_name}) has no navigable role {link.role}"
            continue
        target = typed.get(link.target)
        if target is None or target.type_name not in rcd.subclass_closure[info.target]:
            yield f"link {link.source} {link.role} {link.target} does not end at an instance of {info.target}"
            continue
        incoming[(info.assoc_index, info.direction, link.target)] += 1
        if info.whole_to_part:
            wholes[link.target] += 1
        if info.bidirectional and (link.target, info.reverse_role, link.source) not in om.triples:
            yield f"link {link.source} {link.role} {link.target} lacks its opposite {info.reverse_role} link"

    for info in rcd.directions:
        if not info.navigable:
            continue
        for o in typed.values():
            if o.type_name in rcd.subclass_closure[info.source]:
                count = len(om.targets(o.id, info.role))
                if not info.out_mult.admits(count):
                    yield f"{o.id} has {count} {info.role} links, expected {info.out_mult}"
            if o.type_name in rcd.subclass_closure[info.target]:
                count = incoming[(info.assoc_index, info.direction, o.id)]
                if not info.in_mult.admits(count):
                    yield f"{o.id} is reached by {count} {info.role} links, expected {info.in_mult}"

    for part, count in wholes.items():
        if count > 1:
            yield f"{part} is part of {count} wholes"

    yield from _singleton_violations(om, rcd, typed)


def _singleton_violations(om: ObjectModel, rcd: ResolvedCD, typed: dict[str, ObjInstance]) -> Iterator[str]:
    if not om.is_empty():
        for singleton in rcd.singleton_classes():
            count = sum(1 for o in typed.values() if o.type_name == singleton)
            if count != 1:
                yield f"singleton class {singleton} has {count} instances"


def in_sem_cd(om: ObjectModel, rcd: ResolvedCD, config: SemanticConfig) -> bool:
    return next(cd_violations(om, rcd, config), None) is None


class _Embedder:
    def __init__(self, om: ObjectModel, pair: ResolvedPair, config: SemanticConfig, links: bool = True):
        self.om = om
        self.links = links
        self.pair = pair
        self.config = config
        self.names = pair.od_objects
        self.shown_roles = {o: set(pair.shown_roles(o)) for o in self.names}
        self.shown_partners = {
            (o, r): set(pair.shown_partners(o, r)) for o in self.names for r in self.shown_roles[o]
        }

    def candidate(self, od_name: str, x: ObjInstance) -> bool:
        """Conditions on a single image: typing, attributes, link counts."""
        status = self.pair.od_type_status[od_name]
        if status.kind == "resolved":
            if x.foreign:
                return False
            if self.config.od_strict_typing:
                if x.type_name != status.type_name:
                    return False
            elif x.type_name not in self.pair.subclass_closure[status.type_name]:
                return False
        elif status.kind == "unknown":
            if not x.foreign or x.type_name != status.type_name:
                return False

        shown = [a.name for a in self.pair.od.object_named(od_name).attributes]
        for name in shown:
            actual = x.attributes.get(name)
            if actual is None or not actual.matches(self.pair.od_values[(od_name, name)]):
                return False
        if self.config.od_attributes_complete and set(x.attributes) != set(shown):
            return False

        if self.links and self.config.od_links_complete:
            roles = self.om.roles_from.get(x.id, frozenset())
            if not roles <= self.shown_roles[od_name]:
                return False
            for r in self.shown_roles[od_name]:
                if len(self.om.targets(x.id, r)) != len(self.shown_partners[(od_name, r)]):
                    return False
        return True

    def consistent_links(self, mapping: dict[str, str]) -> bool:
        if not self.links:
            return True
        for link in self.pair.shown_links:
            if link.source in mapping and link.target in mapping:
                if (mapping[link.source], link.role, mapping[link.target]) not in self.om.triples:
                    return False
        return True

    def links_complete(self, mapping: dict[str, str]) -> bool:
        if not (self.links and self.config.od_links_complete):
            return True
        for (o, r), partners in self.shown_partners.items():
            if self.om.targets(mapping[o], r) != {mapping[p] for p in partners}:
                return False
        return True

    def search(self) -> Optional[dict[str, str]]:
        candidates = {
            n: [x.id for x in self.om.objects if self.candidate(n, x)] for n in self.names
        }
        order = sorted(self.names, key=lambda n: len(candidates[n]))
        mapping: dict[str, str] = {}
        used: set[str] = set()

        def extend(i: int) -> bool:
            if i == len(order):
                return self.links_complete(mapping)
            name = order[i]
            for x in candidates[name]:
                if x in used:
                    continue
                mapping[name] = x
                used.add(x)
                if self.consistent_links(mapping) and extend(i + 1):
                    return True
                del mapping[name]
                used.discard(x)
            return False

        return {n: mapping[n] for n in self.names} if extend(0) else None


def od_admits(om: ObjectModel, pair: ResolvedPair, config: SemanticConfig) -> bool:
    """The object-model-wide OD clauses: empty OM, object completeness, untyped objects."""
    if config.od_empty_om_invalid and om.is_empty():
        return False
    if config.od_objects_complete and len(om.objects) != len(pair.od_objects):
        return False
    if config.od_types_complete and any(s.kind == "untyped" for s in pair.od_type_status.values()):
        return False
    return True


def find_embedding(
    om: ObjectModel, pair: ResolvedPair, config: SemanticConfig, links: bool = True
) -> Optional[dict[str, str]]:
    """
    Find an injective map from OD objects to OM objects under which the OD
    describes the object model, or None when there is none.

    With links=False the link clauses are ignored (a necessary condition only).
    """
    if not od_admits(om, pair, config):
        return None
    return _Embedder(om, pair, config, links).search()


def is_embedding(om: ObjectModel, pair: ResolvedPair, config: SemanticConfig, mapping: dict[str, str]) -> bool:
    """Check one complete candidate map; the brute-force counterpart of find_embedding."""
    if not od_admits(om, pair, config):
        return False
    if set(mapping) != set(pair.od_objects) or len(set(mapping.values())) != len(mapping):
        return False
    if any(x not in om.by_id for x in mapping.values()):
        return False
    embedder = _Embedder(om, pair, config)
    return (
        all(embedder.candidate(n, om.by_id[x]) for n, x in mapping.items())
        and embedder.consistent_links(mapping)
        and embedder.links_complete(mapping)
    )


def in_sem_od(om: ObjectModel, pair: ResolvedPair, config: SemanticConfig) -> bool:
    return find_embedding(om, pair, config) is not None


def in_intersection(om: ObjectModel, pair: ResolvedPair, config: SemanticConfig) -> bool:
    return in_sem_cd(om, pair, config) and in_sem_od(om, pair, config)
