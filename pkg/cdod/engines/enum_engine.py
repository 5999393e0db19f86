"""
Brute-force bounded enumeration of object models: the ground-truth oracle the SAT
engine is compared against.
"""

import logging
from itertools import combinations, combinations_with_replacement, product
from typing import Callable, Iterator, Optional

from cdod.diagrams.resolve import ResolvedPair, RoleInfo
from cdod.engines.base_engine import ConsistencyEngine, EngineStats, SearchResult
from cdod.engines.scope import Scope
from cdod.engines.space import AttrChoice, CandidateSpace, LinkFamily, Slot, build_space
from cdod.features.semantic_config import SemanticConfig
from cdod.semantics.membership import cd_violations, find_embedding, in_sem_cd, in_sem_od
from cdod.semantics.object_model import Link, ObjectModel, ObjInstance

logger = logging.getLogger(__name__)

Valuation = tuple[tuple[str, object], ...]


def is_primary(info: RoleInfo) -> bool:
    """
    For a bidirectional association only one direction is enumerated; the other
    is derived. The primary one has the smaller finite upper bound.
    """
    if not info.bidirectional:
        return True
    inf = float("inf")
    own = info.out_mult.upper if info.out_mult.upper is not None else inf
    other = info.in_mult.upper if info.in_mult.upper is not None else inf
    if own != other:
        return own < other
    return info.direction == "leftToRight"


def _valuations(choices: tuple[AttrChoice, ...]) -> list[Valuation]:
    options = []
    for choice in choices:
        values = list(choice.values) + ([None] if choice.optional else [])
        options.append([(choice.name, v) for v in values])
    return [tuple((n, v) for n, v in combo if v is not None) for combo in product(*options)]


def _subsets(targets: list[str], lower: int, upper: Optional[int]) -> list[tuple[str, ...]]:
    top = len(targets) if upper is None else min(upper, len(targets))
    return [c for k in range(lower, top + 1) for c in combinations(targets, k)]


def _count_vectors(limits: list[int], total: int) -> Iterator[tuple[int, ...]]:
    for counts in product(*(range(n + 1) for n in limits)):
        if sum(counts) == total:
            yield counts


class _Enumerator:
    def __init__(self, space: CandidateSpace, pair: ResolvedPair):
        self.space = space
        self.pair = pair
        self.groups: list[tuple[Optional[str], tuple[Slot, ...]]] = [
            (cls, space.class_slots(cls)) for cls in pair.concrete_classes if space.class_slots(cls)
        ]
        if space.foreign_slots():
            self.groups.append((None, space.foreign_slots()))

    def objects(self, counts: tuple[int, ...]) -> Iterator[tuple[ObjInstance, ...]]:
        per_group = []
        for (cls, slots), k in zip(self.groups, counts):
            used = slots[:k]
            if not used:
                per_group.append([()])
                continue
            valuations = _valuations(self.space.attributes[used[0].id])
            if cls is None:
                valuations = [(("\0tag", t),) + v for t in self.space.tags for v in valuations]
            per_group.append([
                tuple(self._instance(s, v) for s, v in zip(used, combo))
                for combo in combinations_with_replacement(valuations, k)
            ])
        for parts in product(*per_group):
            yield tuple(o for part in parts for o in part)

    @staticmethod
    def _instance(slot: Slot, valuation: Valuation) -> ObjInstance:
        values = dict(valuation)
        if slot.foreign:
            tag = values.pop("\0tag")
            return ObjInstance(id=slot.id, type_name=tag, foreign=True, attributes=values)
        return ObjInstance(id=slot.id, type_name=slot.cls, attributes=values)

    def link_options(self, objects: tuple[ObjInstance, ...]) -> list[list[list[tuple[str, str, str]]]]:
        existing = {o.id for o in objects}
        options = []
        for o in objects:
            for family in self.space.links[o.id]:
                options.append(self._family_options(o, family, existing))
        return options

    def _family_options(self, o: ObjInstance, family: LinkFamily, existing: set[str]) -> list[list[tuple[str, str, str]]]:
        targets = [t for t in family.targets if t in existing]
        if family.info is None:
            if o.type_name not in family.tags:
                return [[]]
            subsets = _subsets(targets, 0, None)
            return [[(o.id, family.role, t) for t in subset] for subset in subsets]
        info = family.info
        if not is_primary(info):
            return [[]]
        found = []
        for subset in _subsets(targets, info.out_mult.lower, info.out_mult.upper):
            links = [(o.id, info.role, t) for t in subset]
            if info.bidirectional:
                links += [(t, info.reverse_role, o.id) for t in subset]
            found.append(links)
        return found

    def models(
        self,
        totals: range,
        keep: Optional[Callable[[ObjectModel], bool]] = None,
    ) -> Iterator[ObjectModel]:
        limits = [len(slots) for _, slots in self.groups]
        for total in totals:
            for counts in _count_vectors(limits, total):
                for objects in self.objects(counts):
                    bare = ObjectModel(objects=objects)
                    if keep is not None and not keep(bare):
                        continue
                    for chosen in product(*self.link_options(objects)):
                        triples = sorted({t for links in chosen for t in links})
                        yield ObjectModel(
                            objects=objects,
                            links=tuple(Link(source=s, role=r, target=t) for s, r, t in triples),
                        )


def enumerate_oms(pair: ResolvedPair, config: SemanticConfig, scope: Scope) -> Iterator[ObjectModel]:
    """
    Lazily yield every object model of the candidate space, smallest first.

    Objects of one class are interchangeable, so each model is produced once up to
    renaming of objects the OD does not name.
    """
    space = build_space(pair, config, scope)
    yield from _Enumerator(space, pair).models(range(space.max_objects + 1))


class EnumEngine(ConsistencyEngine):
    name: str = "enum"

    def search(self, pair: ResolvedPair, config: SemanticConfig, scope: Scope) -> SearchResult:
        space = build_space(pair, config, scope)
        n_od = len(pair.od_objects)
        lowest = max(n_od, 1 if config.cd_empty_om_invalid or config.od_empty_om_invalid else 0)
        highest = n_od if config.od_objects_complete else space.max_objects

        def keep(bare: ObjectModel) -> bool:
            if next(cd_violations(bare, pair, config, check_links=False), None) is not None:
                return False
            return find_embedding(bare, pair, config, links=False) is not None

        stats = EngineStats()
        for om in _Enumerator(space, pair).models(range(lowest, highest + 1), keep):
            stats.candidates += 1
            if stats.candidates % 100_000 == 0:
                logger.debug("enumerated %d candidates", stats.candidates)
            if in_sem_cd(om, pair, config) and in_sem_od(om, pair, config):
                return SearchResult(witness=om, stats=stats)
        logger.info("enumeration exhausted %d candidates", stats.candidates)
        return SearchResult(stats=stats)


def check_enum(pair: ResolvedPair, config: SemanticConfig, scope: Scope, exhaustive: bool, settings=None):
    engine = EnumEngine(settings=settings) if settings is not None else EnumEngine()
    return engine.check(pair, config, scope=(scope, exhaustive))
