import pytest

from cdod.diagrams import parse_cd, parse_od, resolve
from cdod.engines import Outcome, SatEngine, check_sat, compute_scope, encode, export_dimacs
from cdod.engines import sat_engine
from cdod.errors import SoundnessError
from cdod.features import load_preset
from cdod.semantics import ObjectModel, in_intersection
from cdod.semantics.membership import is_embedding
from tests.conftest import PAIRS, SCENARIOS, load_pair


@pytest.mark.parametrize("pair_name, preset, expected", SCENARIOS)
def test_verdicts(pair_name, preset, expected):
    pair = load_pair(*PAIRS[pair_name])
    config = load_preset(preset)
    verdict = SatEngine().check(pair, config)
    assert verdict.outcome.value == expected
    assert verdict.exhaustive
    if expected == "CONSISTENT":
        assert in_intersection(verdict.witness, pair, config)
    else:
        assert verdict.witness is None


def test_witness_is_named_after_the_diagram(cd2_od2, elicit):
    verdict = SatEngine().check(cd2_od2, elicit)
    types = {o.id: o.type_name for o in verdict.witness.objects}
    assert set(types) == {"dana", "bob", "t1", "t2"}
    assert types["dana"] == "Mgr"
    assert types["t1"] == types["t2"] == "Tsk"
    # elicit is non-strict: bob may be an Emp or a Mgr
    assert types["bob"] in {"Emp", "Mgr"}
    identity = {name: name for name in cd2_od2.od_objects}
    assert is_embedding(verdict.witness, cd2_od2, elicit, identity)
    assert verdict.stats.variables > 0 and verdict.stats.clauses > 0


GENDER_CD = "classdiagram c { enum Gender {female, male;} class Emp { Gender gender; } }"


@pytest.mark.parametrize("literal, expected", [
    ("other", Outcome.INCONSISTENT),
    ("male", Outcome.CONSISTENT),
])
def test_enum_value_must_be_declared(testing, literal, expected):
    od = parse_od(f"objectdiagram o {{ bob:Emp {{ gender = Gender.{literal}; }} }}")
    pair = resolve(parse_cd(GENDER_CD), od)
    assert SatEngine().check(pair, testing).outcome == expected


def test_open_scope_never_says_inconsistent(cd2_od2, testing):
    config = testing.with_flags(od_objects_complete=False, od_links_complete=False)
    verdict = SatEngine().check(cd2_od2, config)
    assert verdict.outcome == Outcome.UNKNOWN_WITHIN_SCOPE
    assert not verdict.exhaustive


def test_open_scope_finds_extra_objects():
    cd = parse_cd("classdiagram c { class A; class B; association [1] A (a) -> (b) B [1]; }")
    od = parse_od("objectdiagram o { x:A; }")
    config = load_preset("elicit").with_flags(od_objects_complete=False, od_links_complete=False)
    verdict = SatEngine().check(resolve(cd, od), config)
    assert verdict.outcome == Outcome.CONSISTENT
    assert {o.type_name for o in verdict.witness.objects} == {"A", "B"}


def test_unknown_type_becomes_a_foreign_object(elicit):
    pair = resolve(parse_cd("classdiagram c { class A; }"), parse_od("objectdiagram o { a:A; g:Ghost; }"))
    assert SatEngine().check(pair, elicit).outcome == Outcome.INCONSISTENT
    verdict = SatEngine().check(pair, elicit.with_flags(cd_classes_complete=False))
    assert verdict.outcome == Outcome.CONSISTENT
    ghost = next(o for o in verdict.witness.objects if o.id == "g")
    assert ghost.foreign and ghost.type_name == "Ghost"


def test_untyped_object_is_given_a_class(cd1_od1, elicit):
    od = parse_od('objectdiagram o { x; t:Tsk { sDate = "2024-03-01"; } link worksOn x -> t; }')
    pair = resolve(cd1_od1.cd, od)
    assert SatEngine().check(pair, elicit).outcome == Outcome.INCONSISTENT
    verdict = SatEngine().check(pair, elicit.with_flags(od_types_complete=False))
    assert verdict.outcome == Outcome.CONSISTENT
    assert {o.id: o.type_name for o in verdict.witness.objects}["x"] == "Emp"


def test_singleton_and_composition(codegen):
    cd = parse_cd("""
    classdiagram c {
      singleton class Root;
      class Part;
      composition [1] Root (root) -> (parts) Part [*];
    }
    """)
    two_roots = resolve(cd, parse_od("objectdiagram o { r1:Root; r2:Root; }"))
    assert SatEngine().check(two_roots, codegen).outcome == Outcome.INCONSISTENT
    part_only = resolve(cd, parse_od("objectdiagram o { p:Part; }"))
    assert SatEngine().check(part_only, codegen).outcome == Outcome.INCONSISTENT
    open_config = codegen.with_flags(od_objects_complete=False, od_links_complete=False)
    verdict = SatEngine().check(part_only, open_config)
    assert verdict.outcome == Outcome.CONSISTENT
    assert {o.type_name for o in verdict.witness.objects} == {"Part", "Root"}


def test_resource_limit_gives_unknown(cd2_od2, elicit, monkeypatch):
    monkeypatch.setattr(sat_engine, "solve", lambda encoding, settings=None: (None, None))
    verdict = SatEngine().check(cd2_od2, elicit)
    assert verdict.outcome == Outcome.UNKNOWN_WITHIN_SCOPE
    assert verdict.resource_limited
    assert verdict.exhaustive


def test_invalid_witness_is_caught(cd2_od2, elicit, monkeypatch):
    monkeypatch.setattr(sat_engine, "decode", lambda encoding, model: ObjectModel())
    with pytest.raises(SoundnessError, match="invalid witness"):
        SatEngine().check(cd2_od2, elicit)


def test_check_sat_with_precomputed_scope(cd1_od1, elicit):
    scope, exhaustive = compute_scope(cd1_od1, elicit)
    verdict = check_sat(cd1_od1, elicit, scope, exhaustive)
    assert verdict.engine == "sat"
    assert verdict.scope == scope


def test_dimacs_export(cd2_od2, elicit, tmp_path):
    scope, _ = compute_scope(cd2_od2, elicit)
    encoding = encode(cd2_od2, elicit, scope)
    path = tmp_path / "od2.cnf"
    export_dimacs(encoding, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "c cdod consistency of od2 under elicit"
    header = next(line for line in lines if line.startswith("p cnf"))
    _, _, variables, clauses = header.split()
    assert int(clauses) == encoding.clauses
    assert int(variables) <= encoding.variables
    assert any(line.startswith("c ") and " ex tsk_0" in line for line in lines)
