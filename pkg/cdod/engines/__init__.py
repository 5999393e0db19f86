from cdod.engines.base_engine import ConsistencyEngine, EngineStats, Outcome, Verdict
from cdod.engines.enum_engine import EnumEngine, check_enum, enumerate_oms
from cdod.engines.sat_engine import SatEngine, check_sat, encode, export_dimacs
from cdod.engines.scope import Scope, ScopeOverrides, compute_scope

ENGINES: dict[str, type[ConsistencyEngine]] = {
    "sat": SatEngine,
    "enum": EnumEngine,
}

__all__ = [
    "ENGINES",
    "ConsistencyEngine",
    "EngineStats",
    "Outcome",
    "Verdict",
    "EnumEngine",
    "check_enum",
    "enumerate_oms",
    "SatEngine",
    "check_sat",
    "encode",
    "export_dimacs",
    "Scope",
    "ScopeOverrides",
    "compute_scope",
]
