"""
Bounded consistency check by reduction to propositional satisfiability.

The candidate space (see cdod.engines.space) is encoded with one variable per
slot existence, foreign tag, attribute value, potential link and potential
embedding pair. Cardinalities use the sequential counter encoding.
"""

import logging
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict
from pysat.card import CardEnc, EncType
from pysat.formula import CNF, IDPool
from pysat.solvers import Solver

from cdod.config.analysis_config import AnalysisSettings
from cdod.diagrams.resolve import ResolvedPair
from cdod.engines.base_engine import ConsistencyEngine, EngineStats, SearchResult, Verdict
from cdod.engines.scope import Scope
from cdod.engines.space import CandidateSpace, Slot, build_space
from cdod.features.semantic_config import SemanticConfig
from cdod.semantics.object_model import Link, ObjectModel, ObjInstance

logger = logging.getLogger(__name__)


class Encoding(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    space: CandidateSpace
    pool: IDPool
    cnf: CNF
    pair_name: str
    config_label: str

    @property
    def variables(self) -> int:
        return self.pool.top

    @property
    def clauses(self) -> int:
        return len(self.cnf.clauses)


class _Encoder:
    def __init__(self, pair: ResolvedPair, config: SemanticConfig, space: CandidateSpace):
        self.pair = pair
        self.config = config
        self.space = space
        self.pool = IDPool()
        self.cnf = CNF()

    # variables

    def ex(self, s: str) -> int:
        return self.pool.id(("ex", s))

    def tag(self, s: str, t: str) -> int:
        return self.pool.id(("tag", s, t))

    def attr(self, s: str, name: str, k: int) -> int:
        return self.pool.id(("attr", s, name, k))

    def link(self, s: str, role: str, t: str) -> int:
        return self.pool.id(("link", s, role, t))

    def embed(self, o: str, s: str) -> int:
        return self.pool.id(("embed", o, s))

    # clause helpers

    def add(self, clause: list[int]) -> None:
        self.cnf.append(clause)

    def atmost(self, lits: list[int], bound: int) -> None:
        if bound >= len(lits):
            return
        if bound == 0:
            for lit in lits:
                self.add([-lit])
            return
        encoded = CardEnc.atmost(lits=lits, bound=bound, vpool=self.pool, encoding=EncType.seqcounter)
        for clause in encoded.clauses:
            self.add(clause)

    def atleast(self, lits: list[int], bound: int, when: Optional[int] = None) -> None:
        """At least `bound` of `lits`, only required when `when` holds."""
        guard = [-when] if when else []
        if bound <= 0:
            return
        if bound > len(lits):
            self.add(guard)
            return
        if bound == 1:
            self.add(guard + lits)
            return
        encoded = CardEnc.atleast(lits=lits, bound=bound, vpool=self.pool, encoding=EncType.seqcounter)
        for clause in encoded.clauses:
            self.add(guard + clause)

    # structure

    def objects(self) -> None:
        slots = self.space.slots
        for s in self.space.foreign_slots():
            tags = [self.tag(s.id, t) for t in self.space.tags]
            self.add([-self.ex(s.id)] + tags)
            for lit in tags:
                self.add([-lit, self.ex(s.id)])
            self.atmost(tags, 1)

        groups: dict[Optional[str], list[Slot]] = {}
        for s in slots:
            groups.setdefault(s.cls, []).append(s)
        for members in groups.values():
            for a, b in zip(members, members[1:]):
                self.add([-self.ex(b.id), self.ex(a.id)])

        all_ex = [self.ex(s.id) for s in slots]
        self.atmost(all_ex, self.space.max_objects)
        if self.config.cd_empty_om_invalid or self.config.od_empty_om_invalid:
            self.add(all_ex)

        for singleton in self.pair.singleton_classes():
            members = self.space.class_slots(singleton)
            if not members:
                for lit in all_ex:
                    self.add([-lit])
                continue
            first = self.ex(members[0].id)
            for lit in all_ex:
                self.add([-lit, first])
            self.atmost([self.ex(s.id) for s in members], 1)

    def attributes(self) -> None:
        for s in self.space.slots:
            for choice in self.space.attributes[s.id]:
                lits = [self.attr(s.id, choice.name, k) for k in range(len(choice.values))]
                for lit in lits:
                    self.add([-lit, self.ex(s.id)])
                if not choice.optional:
                    self.add([-self.ex(s.id)] + lits)
                self.atmost(lits, 1)

    def links(self) -> None:
        incoming: dict[tuple[int, str, str], list[int]] = {}
        wholes: dict[str, list[int]] = {}
        for s in self.space.slots:
            for family in self.space.links[s.id]:
                lits = [self.link(s.id, family.role, t) for t in family.targets]
                for t, lit in zip(family.targets, lits):
                    self.add([-lit, self.ex(s.id)])
                    self.add([-lit, self.ex(t)])
                if family.info is None:
                    for lit in lits:
                        self.add([-lit] + [self.tag(s.id, t) for t in family.tags])
                    continue
                info = family.info
                self.atmost(lits, info.out_mult.upper if info.out_mult.upper is not None else len(lits))
                self.atleast(lits, info.out_mult.lower, when=self.ex(s.id))
                for t, lit in zip(family.targets, lits):
                    incoming.setdefault((info.assoc_index, info.direction, t), []).append(lit)
                    if info.whole_to_part:
                        wholes.setdefault(t, []).append(lit)
                    if info.bidirectional:
                        reverse = self.link(t, info.reverse_role, s.id)
                        self.add([-lit, reverse])
                        self.add([lit, -reverse])

        for info in self.pair.directions:
            if not info.navigable:
                continue
            for cls in self.pair.subclass_closure[info.target]:
                for t in self.space.class_slots(cls):
                    lits = incoming.get((info.assoc_index, info.direction, t.id), [])
                    if info.in_mult.upper is not None:
                        self.atmost(lits, info.in_mult.upper)
                    self.atleast(lits, info.in_mult.lower, when=self.ex(t.id))
        for lits in wholes.values():
            self.atmost(lits, 1)

    # object diagram

    def _admissible(self, o: str, s: Slot) -> bool:
        status = self.pair.od_type_status[o]
        if status.kind == "resolved":
            if s.foreign:
                return False
            if self.config.od_strict_typing:
                return s.cls == status.type_name
            return s.cls in self.pair.subclass_closure[status.type_name]
        if status.kind == "unknown":
            return s.foreign
        return True

    def _value_lits(self, o: str, s: Slot) -> Optional[list[list[int]]]:
        """Per shown attribute, the literals that satisfy it; None when one cannot be satisfied."""
        choices = {c.name: c for c in self.space.attributes[s.id]}
        shown = [a.name for a in self.pair.od.object_named(o).attributes]
        found = []
        for name in shown:
            choice = choices.get(name)
            if choice is None:
                return None
            wanted = self.pair.od_values[(o, name)]
            lits = [self.attr(s.id, name, k) for k, v in enumerate(choice.values) if v.matches(wanted)]
            if not lits:
                return None
            found.append(lits)
        if self.config.od_attributes_complete:
            if any(not c.optional and c.name not in shown for c in choices.values()):
                return None
        return found

    def embedding(self) -> None:
        names = self.pair.od_objects
        if self.config.od_types_complete and any(
            st.kind == "untyped" for st in self.pair.od_type_status.values()
        ):
            self.add([])
            return

        pairs: dict[str, list[str]] = {}
        for o in names:
            status = self.pair.od_type_status[o]
            shown = {a.name for a in self.pair.od.object_named(o).attributes}
            images = []
            for s in self.space.slots:
                if not self._admissible(o, s):
                    continue
                value_lits = self._value_lits(o, s)
                if value_lits is None:
                    continue
                e = self.embed(o, s.id)
                images.append(s.id)
                self.add([-e, self.ex(s.id)])
                if status.kind == "unknown":
                    self.add([-e, self.tag(s.id, status.type_name)])
                for lits in value_lits:
                    self.add([-e] + lits)
                if self.config.od_attributes_complete:
                    for choice in self.space.attributes[s.id]:
                        if choice.name not in shown:
                            for k in range(len(choice.values)):
                                self.add([-e, -self.attr(s.id, choice.name, k)])
            pairs[o] = images
            lits = [self.embed(o, s) for s in images]
            self.add(lits)
            self.atmost(lits, 1)

        for s in self.space.slots:
            self.atmost([self.embed(o, s.id) for o in names if s.id in pairs[o]], 1)

        families = {s.id: {f.role: f for f in self.space.links[s.id]} for s in self.space.slots}
        for link in self.pair.shown_links:
            for s in pairs[link.source]:
                family = families[s].get(link.role)
                for t in pairs[link.target]:
                    e_pair = [-self.embed(link.source, s), -self.embed(link.target, t)]
                    if family is None or t not in family.targets:
                        self.add(e_pair)
                    else:
                        self.add(e_pair + [self.link(s, link.role, t)])

        if self.config.od_links_complete:
            for o in names:
                roles = set(self.pair.shown_roles(o))
                for s in pairs[o]:
                    e = self.embed(o, s)
                    for family in self.space.links[s]:
                        partners = self.pair.shown_partners(o, family.role) if family.role in roles else ()
                        for t in family.targets:
                            images = [self.embed(p, t) for p in partners if t in pairs[p]]
                            self.add([-e, -self.link(s, family.role, t)] + images)

        if self.config.od_objects_complete:
            self.atmost([self.ex(s.id) for s in self.space.slots], len(names))

    def encode(self) -> CNF:
        self.objects()
        self.attributes()
        self.links()
        self.embedding()
        return self.cnf


def encode(pair: ResolvedPair, config: SemanticConfig, scope: Scope) -> Encoding:
    """Encode consistency of the pair within `scope` as CNF."""
    space = build_space(pair, config, scope)
    encoder = _Encoder(pair, config, space)
    cnf = encoder.encode()
    encoding = Encoding(
        space=space, pool=encoder.pool, cnf=cnf, pair_name=pair.od.name, config_label=config.label
    )
    logger.debug("encoded %s: %d variables, %d clauses", pair.od.name, encoding.variables, encoding.clauses)
    return encoding


def solve(encoding: Encoding, settings: Optional[AnalysisSettings] = None) -> tuple[Optional[bool], Optional[list[int]]]:
    """
    Run the solver under the conflict budget.

    Returns (True, model), (False, None), or (None, None) when the budget ran out.
    """
    settings = settings or AnalysisSettings()
    with Solver(name=settings.solver, bootstrap_with=encoding.cnf.clauses) as solver:
        solver.conf_budget(settings.conflict_limit)
        status = solver.solve_limited()
        if status is None:
            logger.warning("solver gave up after %d conflicts", settings.conflict_limit)
            return None, None
        return status, solver.get_model() if status else None


def decode(encoding: Encoding, model: list[int]) -> ObjectModel:
    """Read the object model off a satisfying assignment."""
    true = set(lit for lit in model if lit > 0)
    pool = encoding.pool

    def holds(key: tuple) -> bool:
        return key in pool.obj2id and pool.obj2id[key] in true

    space = encoding.space
    objects = []
    existing = set()
    for s in space.slots:
        if not holds(("ex", s.id)):
            continue
        existing.add(s.id)
        values = {}
        for choice in space.attributes[s.id]:
            for k, value in enumerate(choice.values):
                if holds(("attr", s.id, choice.name, k)):
                    values[choice.name] = value
        if s.foreign:
            tag = next(t for t in space.tags if holds(("tag", s.id, t)))
            objects.append(ObjInstance(id=s.id, type_name=tag, foreign=True, attributes=values))
        else:
            objects.append(ObjInstance(id=s.id, type_name=s.cls, attributes=values))

    links = []
    for s in space.slots:
        for family in space.links[s.id]:
            for t in family.targets:
                if holds(("link", s.id, family.role, t)):
                    links.append(Link(source=s.id, role=family.role, target=t))
    return ObjectModel(objects=tuple(objects), links=tuple(links))


def export_dimacs(encoding: Encoding, path: Path) -> None:
    """Write the CNF in DIMACS format with a comment header naming its variables."""
    comments = [
        f"c cdod consistency of {encoding.pair_name} under {encoding.config_label}",
        f"c {len(encoding.space.slots)} slots, at most {encoding.space.max_objects} objects",
    ]
    for key, var in sorted(encoding.pool.obj2id.items(), key=lambda kv: kv[1]):
        if isinstance(key, tuple) and key and key[0] in ("ex", "tag", "attr", "link", "embed"):
            comments.append(f"c {var} {' '.join(str(k) for k in key)}")
    encoding.cnf.to_file(str(path), comments=comments)
    logger.info("wrote %s (%d variables, %d clauses)", path, encoding.variables, encoding.clauses)


class SatEngine(ConsistencyEngine):
    name: str = "sat"

    def search(self, pair: ResolvedPair, config: SemanticConfig, scope: Scope) -> SearchResult:
        encoding = encode(pair, config, scope)
        stats = EngineStats(variables=encoding.variables, clauses=encoding.clauses)
        status, model = solve(encoding, self.settings)
        if status is None:
            return SearchResult(stats=stats, resource_limited=True)
        if not status:
            return SearchResult(stats=stats)
        return SearchResult(witness=decode(encoding, model), stats=stats)


def check_sat(
    pair: ResolvedPair,
    config: SemanticConfig,
    scope: Scope,
    exhaustive: bool,
    settings: Optional[AnalysisSettings] = None,
) -> Verdict:
    engine = SatEngine(settings=settings) if settings is not None else SatEngine()
    return engine.check(pair, config, scope=(scope, exhaustive))
