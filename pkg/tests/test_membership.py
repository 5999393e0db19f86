import random
from itertools import permutations

import pytest

from cdod.diagrams import parse_cd, parse_od, resolve
from cdod.diagrams.ast import Value
from cdod.semantics import (
    Link,
    ObjectModel,
    ObjInstance,
    cd_violations,
    find_embedding,
    in_intersection,
    in_sem_cd,
    in_sem_od,
    om_well_formed,
)
from cdod.features import enumerate_valid
from cdod.semantics.membership import is_embedding
from tests.random_models import random_triple

FEMALE = Value.enum_("Gender", "female")
MALE = Value.enum_("Gender", "male")


def _task(id: str, day: str, priority: int) -> ObjInstance:
    return ObjInstance(id=id, type_name="Tsk", attributes={"priority": Value.int_(priority), "sDate": Value.date(day)})


@pytest.fixture
def team():
    """An object model of cd2 in which dana is a manager."""
    return ObjectModel(
        objects=(
            ObjInstance(id="dana", type_name="Mgr", attributes={
                "gender": FEMALE, "exp": Value.int_(3), "name": Value.str_("Dana"),
            }),
            ObjInstance(id="bob", type_name="Emp", attributes={"gender": MALE, "name": Value.str_("Bob")}),
            _task("t1", "2024-03-01", 1),
            _task("t2", "2024-04-15", 2),
        ),
        links=(
            Link(source="bob", role="mngBy", target="dana"),
            Link(source="dana", role="worksOn", target="t1"),
            Link(source="dana", role="worksOn", target="t2"),
            Link(source="t1", role="doneBy", target="dana"),
            Link(source="t2", role="doneBy", target="dana"),
        ),
    )


def test_team_is_a_witness_under_elicit(team, cd2_od2, elicit):
    assert list(cd_violations(team, cd2_od2, elicit)) == []
    assert find_embedding(team, cd2_od2, elicit) == {"dana": "dana", "bob": "bob", "t1": "t1", "t2": "t2"}
    assert in_intersection(team, cd2_od2, elicit)


def test_strict_typing_rejects_the_manager(team, cd2_od2, testing):
    assert in_sem_cd(team, cd2_od2, testing)
    assert not in_sem_od(team, cd2_od2, testing)
    relaxed = testing.with_flags(od_strict_typing=False, od_attributes_complete=False)
    assert in_sem_od(team, cd2_od2, relaxed)


def test_missing_opposite_link(team, cd2_od2, elicit):
    broken = team.model_copy(update={"links": team.links[:-1]})
    problems = list(cd_violations(broken, cd2_od2, elicit))
    assert any("lacks its opposite doneBy" in p for p in problems)
    assert any("t2 has 0 doneBy links" in p for p in problems)


def test_out_multiplicity(team, cd2_od2, elicit):
    extra = ObjectModel(
        objects=team.objects + (_task("t3", "2024-05-01", 3),),
        links=team.links + (
            Link(source="dana", role="worksOn", target="t3"),
            Link(source="t3", role="doneBy", target="dana"),
        ),
    )
    assert any("3 worksOn links, expected [0..2]" in p for p in cd_violations(extra, cd2_od2, elicit))


def test_missing_and_mistyped_attributes(team, cd2_od2, elicit):
    bob = team.objects[1]
    without_name = bob.model_copy(update={"attributes": {"gender": MALE}})
    wrong_type = bob.model_copy(update={"attributes": {"gender": Value.int_(1), "name": Value.str_("Bob")}})
    for replacement, fragment in ((without_name, "lacks attribute name"), (wrong_type, "not a value of type Gender")):
        om = team.model_copy(update={"objects": tuple(replacement if o.id == "bob" else o for o in team.objects)})
        assert any(fragment in p for p in cd_violations(om, cd2_od2, elicit))


def test_undeclared_attribute_needs_incomplete_attributes(team, cd2_od2, elicit, evolve):
    bob = team.objects[1]
    chatty = bob.model_copy(update={"attributes": {**bob.attributes, "nickname": Value.str_("B")}})
    om = team.model_copy(update={"objects": tuple(chatty if o.id == "bob" else o for o in team.objects)})
    assert not in_sem_cd(om, cd2_od2, elicit)
    assert in_sem_cd(om, cd2_od2, evolve)


def test_empty_object_model(cd2_od2, elicit, codegen):
    empty = ObjectModel()
    assert not in_sem_cd(empty, cd2_od2, elicit)
    assert in_sem_cd(empty, cd2_od2, codegen)
    assert not in_sem_od(empty, cd2_od2, codegen)


def test_empty_od_admits_the_empty_model(codegen, testing):
    pair = resolve(parse_cd("classdiagram c { class A; }"), parse_od("objectdiagram e { }"))
    assert in_intersection(ObjectModel(), pair, codegen)
    assert not in_intersection(ObjectModel(), pair, testing)


def test_foreign_objects(elicit):
    pair = resolve(parse_cd("classdiagram c { class A; }"), parse_od("objectdiagram o { a:A; g:Ghost; }"))
    om = ObjectModel(objects=(
        ObjInstance(id="a", type_name="A"),
        ObjInstance(id="g", type_name="Ghost", foreign=True),
    ))
    open_world = elicit.with_flags(cd_classes_complete=False)
    assert not in_sem_cd(om, pair, elicit)
    assert in_intersection(om, pair, open_world)
    mislabelled = ObjectModel(objects=(om.objects[0], ObjInstance(id="g", type_name="Other", foreign=True)))
    assert not in_sem_od(mislabelled, pair, open_world)


def test_composition_allows_one_whole(codegen):
    cd = parse_cd("classdiagram c { class W; class P; composition [*] W (whole) -> (parts) P [*]; }")
    pair = resolve(cd, parse_od("objectdiagram e { }"))
    om = ObjectModel(
        objects=(ObjInstance(id="w1", type_name="W"), ObjInstance(id="w2", type_name="W"), ObjInstance(id="p", type_name="P")),
        links=(Link(source="w1", role="parts", target="p"), Link(source="w2", role="parts", target="p")),
    )
    assert any("part of 2 wholes" in p for p in cd_violations(om, pair, codegen))


def test_singleton(codegen):
    cd = parse_cd("classdiagram c { singleton class S; class A; }")
    pair = resolve(cd, parse_od("objectdiagram e { }"))
    one_a = ObjectModel(objects=(ObjInstance(id="a", type_name="A"),))
    with_s = ObjectModel(objects=(ObjInstance(id="a", type_name="A"), ObjInstance(id="s", type_name="S")))
    assert not in_sem_cd(one_a, pair, codegen)
    assert in_sem_cd(with_s, pair, codegen)
    assert in_sem_cd(ObjectModel(), pair, codegen)


def test_links_complete_forbids_unshown_links(team, cd2_od2, elicit):
    pair = resolve(cd2_od2.cd, parse_od("""
    objectdiagram partial {
      dana:Emp; bob:Emp; t1:Tsk; t2:Tsk;
      link worksOn dana -> t1;
      link worksOn dana -> t2;
    }
    """))
    # bob's mngBy link is not shown
    assert not in_sem_od(team, pair, elicit)
    assert in_sem_od(team, pair, elicit.with_flags(od_links_complete=False, od_objects_complete=False))


def test_is_embedding_agrees(team, cd2_od2, elicit):
    mapping = find_embedding(team, cd2_od2, elicit)
    assert is_embedding(team, cd2_od2, elicit, mapping)
    swapped = {**mapping, "dana": "bob", "bob": "dana"}
    assert not is_embedding(team, cd2_od2, elicit, swapped)


def test_undeclared_enum_literal_is_not_a_value(team, cd2_od2, codegen):
    other = Value.enum_("Gender", "other")
    bob = ObjInstance(id="bob", type_name="Emp", attributes={"gender": other, "name": Value.str_("Bob")})
    om = team.model_copy(update={"objects": tuple(bob if o.id == "bob" else o for o in team.objects)})
    assert in_sem_cd(team, cd2_od2, codegen)
    assert not in_sem_cd(om, cd2_od2, codegen)
    assert "bob.gender = Gender.other is not a value of type Gender" in list(cd_violations(om, cd2_od2, codegen))


def test_well_formedness():
    problems: list[str] = []
    om = ObjectModel(
        objects=(ObjInstance(id="a", type_name="A"), ObjInstance(id="a", type_name="A")),
        links=(Link(source="a", role="r", target="b"),),
    )
    assert not om_well_formed(om, problems)
    assert "duplicate object id 'a'" in problems
    assert any("dangling endpoint 'b'" in p for p in problems)


def test_renamed_avoids_collisions(team):
    renamed = team.renamed({"t1": "bob"})
    assert [o.id for o in renamed.objects] == ["dana", "bob_1", "bob", "t2"]
    assert Link(source="dana", role="worksOn", target="bob") in renamed.links


def test_witness_text_parses_back(team):
    od = parse_od(team.to_text("w"))
    assert [o.declared_type for o in od.objects] == ["Mgr", "Emp", "Tsk", "Tsk"]
    assert len(od.links) == 5
    assert team.summary() == "4 objects (1xEmp, 1xMgr, 2xTsk), 5 links"


def _describes(om, pair, config, mapping) -> bool:
    """Whether the OD describes `om` under one complete map, checked clause by clause."""
    od = pair.od
    if config.od_empty_om_invalid and not om.objects:
        return False
    if config.od_objects_complete and len(om.objects) != len(od.objects):
        return False
    if config.od_types_complete and any(o.declared_type is None for o in od.objects):
        return False
    for o in od.objects:
        x = om.by_id[mapping[o.name]]
        if o.declared_type is not None:
            if not pair.is_type(o.declared_type):
                if not (x.foreign and x.type_name == o.declared_type):
                    return False
            elif x.foreign:
                return False
            elif config.od_strict_typing and x.type_name != o.declared_type:
                return False
            elif x.type_name not in pair.subclass_closure[o.declared_type]:
                return False
        for a in o.attributes:
            if a.name not in x.attributes or not x.attributes[a.name].matches(pair.od_values[(o.name, a.name)]):
                return False
        if config.od_attributes_complete and set(x.attributes) != {a.name for a in o.attributes}:
            return False
    mapped = {(mapping[l.source], l.role, mapping[l.target]) for l in pair.shown_links}
    if not mapped <= om.triples:
        return False
    if config.od_links_complete:
        images = set(mapping.values())
        if {t for t in om.triples if t[0] in images} != mapped:
            return False
    return True


def test_find_embedding_agrees_with_every_injective_map():
    rng = random.Random(7)
    configs = enumerate_valid()
    found = 0
    for _ in range(300):
        pair, om = random_triple(rng, max_od=5, max_om=6)
        config = rng.choice(configs)
        names = pair.od_objects
        maps = [dict(zip(names, ids)) for ids in permutations([o.id for o in om.objects], len(names))]
        expected = any(_describes(om, pair, config, m) for m in maps)
        mapping = find_embedding(om, pair, config)
        assert (mapping is not None) == expected, (pair.od, om, config.key)
        if mapping is not None:
            found += 1
            assert _describes(om, pair, config, mapping)
            assert is_embedding(om, pair, config, mapping)
    assert found > 0
