import logging
import time
from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from cdod.config.analysis_config import AnalysisSettings
from cdod.diagrams.resolve import ResolvedPair
from cdod.engines.scope import Scope, ScopeOverrides, compute_scope
from cdod.errors import SoundnessError
from cdod.features.semantic_config import SemanticConfig
from cdod.semantics.membership import cd_violations, find_embedding
from cdod.semantics.object_model import ObjectModel

logger = logging.getLogger(__name__)


class Outcome(str, Enum):
    CONSISTENT = "CONSISTENT"
    INCONSISTENT = "INCONSISTENT"
    UNKNOWN_WITHIN_SCOPE = "UNKNOWN_WITHIN_SCOPE"


class EngineStats(BaseModel):
    variables: int = Field(default=0, description="Propositional variables (SAT engine)")
    clauses: int = Field(default=0, description="CNF clauses (SAT engine)")
    candidates: int = Field(default=0, description="Object models inspected (enumeration engine)")
    seconds: float = Field(default=0.0, description="Wall-clock time of the search")


class SearchResult(BaseModel):
    witness: Optional[ObjectModel] = None
    stats: EngineStats = Field(default_factory=EngineStats)
    resource_limited: bool = False


class Verdict(BaseModel):
    engine: str
    outcome: Outcome
    witness: Optional[ObjectModel] = None
    scope: Scope
    exhaustive: bool
    resource_limited: bool = False
    stats: EngineStats = Field(default_factory=EngineStats)


class ConsistencyEngine(ABC, BaseModel):
    """
    Abstract base class for bounded consistency engines.
    Subclasses implement `search`; `check` turns a search result into a verdict.
    """

    name: str = Field(description="Engine name used in reports")
    settings: AnalysisSettings = Field(default_factory=AnalysisSettings, description="Tool settings")

    @abstractmethod
    def search(self, pair: ResolvedPair, config: SemanticConfig, scope: Scope) -> SearchResult:
        """Look for an object model within `scope` in the semantics of both diagrams."""
        pass

    def check(
        self,
        pair: ResolvedPair,
        config: SemanticConfig,
        user_scope: Optional[ScopeOverrides] = None,
        scope: Optional[tuple[Scope, bool]] = None,
    ) -> Verdict:
        """
        Decide consistency within a scope.

        Args:
            pair: resolved diagrams
            config: a valid semantic configuration
            user_scope: bounds requested by the user, see compute_scope
            scope: a precomputed (scope, exhaustive) pair, overrides user_scope

        Raises:
            SoundnessError: the search produced a model the membership predicates reject
        """
        used, exhaustive = scope if scope is not None else compute_scope(pair, config, self.settings, user_scope)
        start = time.perf_counter()
        result = self.search(pair, config, used)
        result.stats.seconds = time.perf_counter() - start

        if result.witness is not None:
            witness = self._named_witness(result.witness, pair, config)
            return Verdict(
                engine=self.name, outcome=Outcome.CONSISTENT, witness=witness, scope=used,
                exhaustive=exhaustive, stats=result.stats,
            )
        if result.resource_limited or not exhaustive:
            outcome = Outcome.UNKNOWN_WITHIN_SCOPE
        else:
            outcome = Outcome.INCONSISTENT
        return Verdict(
            engine=self.name, outcome=outcome, scope=used, exhaustive=exhaustive,
            resource_limited=result.resource_limited, stats=result.stats,
        )

    def _named_witness(self, witness: ObjectModel, pair: ResolvedPair, config: SemanticConfig) -> ObjectModel:
        """Re-check a witness and name the objects the OD shows after their OD objects."""
        embedding = find_embedding(witness, pair, config)
        problems = list(cd_violations(witness, pair, config))
        if embedding is None or problems:
            detail = "; ".join(problems) or "no embedding of the object diagram"
            raise SoundnessError(f"{self.name} engine produced an invalid witness: {detail}")
        named = witness.renamed({slot: od_name for od_name, slot in embedding.items()})
        logger.debug("witness: %s", named.summary())
        return named
