import logging

import pytest

from cdod.config.analysis_config import AnalysisSettings
from cdod.diagrams import parse_cd, parse_od, resolve
from cdod.diagrams.ast import Value
from cdod.engines import EnumEngine, Outcome, SatEngine, Scope, ScopeOverrides, compute_scope
from cdod.engines.scope import can_host, candidate_classes
from cdod.errors import ScopeError


@pytest.fixture
def open_elicit(elicit):
    return elicit.with_flags(od_objects_complete=False, od_links_complete=False)


def test_shown_objects_give_an_exhaustive_scope(cd2_od2, elicit):
    scope, exhaustive = compute_scope(cd2_od2, elicit)
    assert exhaustive
    assert scope.per_class_max == {"Tsk": 2, "Emp": 2, "Mgr": 2}
    assert scope.foreign_max == 0
    assert scope.max_objects == 4
    assert scope.bound() == 4


def test_strict_typing_narrows_the_scope(cd2_od2, testing):
    scope, _ = compute_scope(cd2_od2, testing)
    assert scope.per_class_max == {"Tsk": 2, "Emp": 2, "Mgr": 0}
    assert candidate_classes(cd2_od2, testing, "dana") == ("Emp",)


def test_value_domains_hold_literals_and_fresh_values(cd2_od2, elicit):
    scope, _ = compute_scope(cd2_od2, elicit)
    dates = scope.value_domains["Date"]
    assert dates[:2] == (Value.date("2024-03-01"), Value.date("2024-04-15"))
    assert len(dates) == 3
    # priority and exp share the int domain
    assert len(scope.value_domains["int"]) == 2
    assert scope.value_domains["boolean"] == (Value.bool_(False), Value.bool_(True))
    assert scope.value_domains["Gender"] == (Value.enum_("Gender", "female"), Value.enum_("Gender", "male"))


def test_open_scope_uses_settings(cd2_od2, open_elicit):
    settings = AnalysisSettings(default_objects_per_class=1, default_max_objects=3)
    scope, exhaustive = compute_scope(cd2_od2, open_elicit, settings)
    assert not exhaustive
    # never below what the object diagram needs
    assert scope.per_class_max == {"Tsk": 2, "Emp": 2, "Mgr": 2}
    assert scope.max_objects == 4


def test_user_scope_overrides(cd2_od2, open_elicit):
    scope, _ = compute_scope(cd2_od2, open_elicit, user_scope=ScopeOverrides(per_class_max={"Mgr": 1}, max_objects=5))
    assert scope.per_class_max["Mgr"] == 1
    assert scope.per_class_max["Emp"] == 3
    assert scope.max_objects == 5


def test_user_scope_too_small(cd2_od2, open_elicit):
    with pytest.raises(ScopeError, match="cannot host"):
        compute_scope(cd2_od2, open_elicit, user_scope=ScopeOverrides(per_class_max={"Emp": 0, "Mgr": 0}))
    with pytest.raises(ScopeError):
        compute_scope(cd2_od2, open_elicit, user_scope=ScopeOverrides(max_objects=3))


def test_object_bounds_ignored_when_objects_are_shown(cd2_od2, elicit, caplog):
    with caplog.at_level(logging.WARNING, logger="cdod.engines.scope"):
        scope, exhaustive = compute_scope(
            cd2_od2, elicit,
            user_scope=ScopeOverrides(per_class_max={"Mgr": 1}, value_domains={"String": (Value.str_("x"),)}),
        )
    assert exhaustive
    assert scope.per_class_max["Mgr"] == 2
    assert Value.str_("x") in scope.value_domains["String"]
    assert "ignored" in caplog.text


def test_can_host_matches_objects_to_classes(cd2_od2, elicit):
    # dana and bob both fit Emp or Mgr, one slot each is enough
    assert can_host(cd2_od2, elicit, Scope(per_class_max={"Tsk": 2, "Emp": 1, "Mgr": 1}))
    assert not can_host(cd2_od2, elicit, Scope(per_class_max={"Tsk": 1, "Emp": 1, "Mgr": 1}))


def test_capped_scope():
    scope = Scope(per_class_max={"A": 5, "B": 1}, foreign_max=4, max_objects=None)
    capped = scope.capped(3)
    assert capped.per_class_max == {"A": 3, "B": 1}
    assert capped.foreign_max == 3
    assert capped.max_objects == 3
    assert capped.describe() == "{A:3, B:1, foreign:3} max 3"


def test_negative_bound_rejected():
    with pytest.raises(ValueError):
        Scope(per_class_max={"A": -1})


def test_unused_primitive_types_still_get_a_value(cd1_od1, elicit):
    scope, _ = compute_scope(cd1_od1, elicit)
    for type_name in ("int", "String", "Date", "boolean"):
        assert scope.value_domains[type_name], type_name


SMALL = AnalysisSettings(default_objects_per_class=1, default_max_objects=2, default_fresh_values=1)

OPEN_PAIRS = {
    "association": (
        "classdiagram c { class A; class B; association [1] A (a) -> (b) B [1]; }",
        "objectdiagram o { x:A; }",
    ),
    "foreign": ("classdiagram c { class A; }", "objectdiagram o { a:A; g:Ghost; }"),
    "attribute": ("classdiagram c { class A { int n; } class B; }", "objectdiagram o { x:A { n = 1; } }"),
}


def _bumped(scope: Scope) -> list[ScopeOverrides]:
    """One override per bound, raising that bound by 1."""
    exact = ScopeOverrides(
        per_class_max=dict(scope.per_class_max), foreign_max=scope.foreign_max, max_objects=scope.max_objects,
    )
    bumps = [
        exact.model_copy(update={"per_class_max": {**scope.per_class_max, c: n + 1}})
        for c, n in scope.per_class_max.items()
    ]
    bumps.append(exact.model_copy(update={"foreign_max": scope.foreign_max + 1}))
    bumps.append(exact.model_copy(update={"max_objects": scope.max_objects + 1}))
    return bumps


@pytest.mark.parametrize("engine_type", [SatEngine, EnumEngine])
@pytest.mark.parametrize("pair_name", sorted(OPEN_PAIRS))
def test_larger_scope_keeps_consistency(open_elicit, engine_type, pair_name):
    cd, od = OPEN_PAIRS[pair_name]
    pair = resolve(parse_cd(cd), parse_od(od))
    config = open_elicit.with_flags(cd_classes_complete=pair_name != "foreign")
    engine = engine_type(settings=SMALL)
    scope, exhaustive = compute_scope(pair, config, SMALL)
    assert not exhaustive
    assert engine.check(pair, config).outcome == Outcome.CONSISTENT
    for overrides in _bumped(scope):
        assert engine.check(pair, config, user_scope=overrides).outcome == Outcome.CONSISTENT, overrides
