"""
Consistency analysis shared by the command line and the HTTP service: reading
inputs, running one or both engines, sweeping all valid configurations.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field

from cdod.config.analysis_config import AnalysisSettings
from cdod.diagrams import read_cd, read_od, resolve
from cdod.diagrams.resolve import ResolvedPair
from cdod.engines import ENGINES, EngineStats, Outcome, Scope, ScopeOverrides, Verdict, compute_scope
from cdod.errors import Diagnostic, EngineDivergence
from cdod.features import compatibility, enumerate_valid, require_valid
from cdod.features.semantic_config import SemanticConfig
from cdod.semantics.object_model import ObjectModel

logger = logging.getLogger(__name__)

EngineChoice = Literal["sat", "enum", "both"]

EXIT_CODES = {
    Outcome.CONSISTENT: 0,
    Outcome.INCONSISTENT: 1,
    Outcome.UNKNOWN_WITHIN_SCOPE: 2,
}


class ConfigSummary(BaseModel):
    name: str
    key: str
    flags: dict[str, bool]

    @classmethod
    def of(cls, config: SemanticConfig) -> "ConfigSummary":
        return cls(name=config.label, key=config.key, flags=config.model_dump(exclude={"name"}))


class CheckReport(BaseModel):
    """The machine-readable result of one consistency check."""

    verdict: Outcome
    engine: str
    config: ConfigSummary
    scope: Scope
    exhaustive: bool
    resource_limited: bool = False
    stats: EngineStats = Field(default_factory=EngineStats)
    diagnostics: list[Diagnostic] = Field(default_factory=list)
    witness: Optional[ObjectModel] = Field(default=None, description="Present iff the verdict is CONSISTENT")

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]


class SweepRow(BaseModel):
    key: str
    config: str
    verdict: Outcome
    exhaustive: bool
    oracle_verdict: Optional[Outcome] = None
    agree: Optional[bool] = None


def load_inputs(cd_path: Path, od_path: Path) -> ResolvedPair:
    return resolve(read_cd(cd_path), read_od(od_path))


def _scope_for(
    pair: ResolvedPair,
    config: SemanticConfig,
    settings: AnalysisSettings,
    user_scope: Optional[ScopeOverrides],
    cap: bool,
) -> tuple[Scope, bool]:
    scope, exhaustive = compute_scope(pair, config, settings, user_scope)
    if cap and not exhaustive:
        scope = scope.capped(settings.enum_max_objects)
    return scope, exhaustive


def _report(verdict: Verdict, engine: str, config: SemanticConfig, diagnostics: list[Diagnostic]) -> CheckReport:
    return CheckReport(
        verdict=verdict.outcome,
        engine=engine,
        config=ConfigSummary.of(config),
        scope=verdict.scope,
        exhaustive=verdict.exhaustive,
        resource_limited=verdict.resource_limited,
        stats=verdict.stats,
        diagnostics=diagnostics,
        witness=verdict.witness,
    )


def run_check(
    pair: ResolvedPair,
    config: SemanticConfig,
    engine: EngineChoice = "sat",
    settings: Optional[AnalysisSettings] = None,
    user_scope: Optional[ScopeOverrides] = None,
) -> CheckReport:
    """
    Check consistency of a resolved pair under one configuration.

    With engine="both" the two engines run on the same scope and must agree.

    Raises:
        ConfigError: the configuration violates a constraint
        ScopeError: the user scope cannot host the OD objects
        EngineDivergence: the engines disagree
        SoundnessError: an engine produced an invalid witness
    """
    settings = settings or AnalysisSettings()
    require_valid(config)
    diagnostics = compatibility(config, pair)
    scope = _scope_for(pair, config, settings, user_scope, cap=engine != "sat")

    if engine != "both":
        verdict = ENGINES[engine](settings=settings).check(pair, config, scope=scope)
        logger.info("%s: %s by %s in %.3fs", config.label, verdict.outcome.value, engine, verdict.stats.seconds)
        return _report(verdict, engine, config, diagnostics)

    sat = ENGINES["sat"](settings=settings).check(pair, config, scope=scope)
    oracle = ENGINES["enum"](settings=settings).check(pair, config, scope=scope)
    if sat.outcome != oracle.outcome:
        logger.error("%s: sat says %s, enumeration says %s", config.label, sat.outcome.value, oracle.outcome.value)
        raise EngineDivergence(
            f"engines disagree on {pair.od.name} under {config.label}: "
            f"sat {sat.outcome.value}, enum {oracle.outcome.value}"
        )
    return _report(sat, "both", config, diagnostics)


def _sweep_one(job: tuple[ResolvedPair, SemanticConfig, AnalysisSettings, bool]) -> SweepRow:
    pair, config, settings, oracle = job
    scope = _scope_for(pair, config, settings, None, cap=oracle)
    verdict = ENGINES["sat"](settings=settings).check(pair, config, scope=scope)
    row = SweepRow(key=config.key, config=config.label, verdict=verdict.outcome, exhaustive=verdict.exhaustive)
    if oracle:
        expected = ENGINES["enum"](settings=settings).check(pair, config, scope=scope)
        row.oracle_verdict = expected.outcome
        row.agree = expected.outcome == verdict.outcome
        if not row.agree:
            logger.error("%s: sat says %s, enumeration says %s", config.label, verdict.outcome.value, expected.outcome.value)
    return row


def run_sweep(
    pair: ResolvedPair,
    settings: Optional[AnalysisSettings] = None,
    oracle: bool = False,
    workers: Optional[int] = None,
    configs: Optional[list[SemanticConfig]] = None,
) -> list[SweepRow]:
    """
    Check the pair under every valid configuration (or the given ones).

    Rows are sorted by configuration key whatever the completion order.
    With `oracle` every row is re-checked by the enumeration engine on the same
    scope; open scopes are then capped at `enum_max_objects` for both engines.
    """
    settings = settings or AnalysisSettings()
    configs = configs if configs is not None else enumerate_valid()
    workers = workers or settings.sweep_workers or os.cpu_count() or 1
    jobs = [(pair, config, settings, oracle) for config in configs]
    logger.info("sweeping %d configurations with %d workers", len(jobs), workers)
    if workers == 1:
        rows = [_sweep_one(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_sweep_one, jobs))
    return sorted(rows, key=lambda r: r.key)
