import pytest

from cdod.diagrams import parse_cd, parse_od, print_cd, print_od, read_cd
from cdod.diagrams.ast import (
    AttributeAssignment,
    Multiplicity,
    ObjDecl,
    ObjectDiagram,
    PrimitiveType,
    Value,
    structurally_equal,
)
from cdod.errors import DiagramError
from tests.conftest import FIXTURES

CD_WITH_EVERYTHING = """
classdiagram shop {
  enum Status {open, closed;}
  interface Named;
  interface Labelled extends Named;
  abstract class Party implements Named {
    String name;
  }
  singleton class Registry;
  class Customer extends Party {
    boolean vip;
  }
  class Order implements Labelled {
    Status status;
    Date placed;
  }
  composition [1] Customer (owner) -> (orders) Order [*];
  aggregation [0..1] Registry (registry) <- (customers) Customer [2..*];
}
"""


def test_parse_cd2():
    cd = read_cd(FIXTURES / "cd2.cd")
    assert cd.name == "cd2"
    assert [c.name for c in cd.classes] == ["Tsk", "Emp", "Mgr"]
    assert cd.class_named("Mgr").superclass == "Emp"
    assert cd.enums[0].literals == ("female", "male")
    mng, works = cd.associations
    assert (mng.left_role, mng.right_role, mng.navigability) == ("mngs", "mngBy", "leftToRight")
    assert mng.right_mult == Multiplicity(lower=0, upper=1)
    assert mng.left_mult == Multiplicity()
    assert works.navigability == "both"
    assert works.left_mult == Multiplicity(lower=1, upper=1)


def test_parse_all_constructs():
    cd = parse_cd(CD_WITH_EVERYTHING)
    party = cd.class_named("Party")
    assert party.is_abstract and party.interfaces == ("Named",)
    assert cd.class_named("Registry").is_singleton
    assert cd.interfaces[1].extends == ("Named",)
    order = cd.class_named("Order")
    assert order.attributes[0].type.enum == "Status"
    assert order.attributes[1].type.primitive == PrimitiveType.DATE
    composition, aggregation = cd.associations
    assert composition.kind == "composition"
    assert aggregation.navigability == "rightToLeft"
    assert aggregation.right_mult == Multiplicity(lower=2)


def test_parse_od_literals():
    od = parse_od("""
    objectdiagram values {
      a:Item {
        count = -3;
        flag = true;
        label = "hello \\"world\\"";
        since = "2024-02-29";
        state = Status.open;
      }
      b;
      link next a -> b;
    }
    """)
    values = {x.name: x.value for x in od.objects[0].attributes}
    assert values["count"] == Value.int_(-3)
    assert values["flag"] == Value.bool_(True)
    assert values["label"] == Value.str_('hello "world"')
    assert values["since"] == Value.date("2024-02-29")
    assert values["state"] == Value.enum_("Status", "open")
    assert od.objects[1].declared_type is None
    assert od.links[0].role == "next"


def test_invalid_date_text_stays_a_string():
    od = parse_od('objectdiagram d { a { when = "2023-02-30"; } }')
    assert od.objects[0].attributes[0].value == Value.str_("2023-02-30")


def test_witness_header_is_accepted():
    od = parse_od("witness objectdiagram w { x:Emp; }")
    assert od.name == "w"


def test_syntax_error_has_position():
    with pytest.raises(DiagramError) as e:
        parse_cd("classdiagram broken {\n  class Emp {\n    int ;\n  }\n}\n")
    diagnostic = e.value.diagnostics[0]
    assert diagnostic.line == 3
    assert diagnostic.column is not None


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("classdiagram a { class A; class A; }", "duplicate name 'A'"),
        ("classdiagram a { class A extends B; }", "unresolved reference 'B'"),
        ("classdiagram a { class A extends B; class B extends A; }", "inheritance cycle"),
        ("classdiagram a { class A { int x; String x; } }", "declared twice"),
        ("classdiagram a { class A; association A (a) -> (b) C; }", "unresolved reference 'C'"),
        ("classdiagram a { class A; association [3..1] A (a) -> (b) A; }", "lower bound above upper bound"),
        ("classdiagram a { class A; class B; composition A (a) <- (b) B; }", "whole (left) side"),
        ("classdiagram a { enum E {x, x;} }", "twice"),
    ],
)
def test_cd_context_conditions(text, fragment):
    with pytest.raises(DiagramError) as e:
        parse_cd(text)
    assert any(fragment in d.message for d in e.value.diagnostics)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("objectdiagram o { a; a; }", "duplicate object name 'a'"),
        ("objectdiagram o { a; link r a -> b; }", "undeclared object 'b'"),
        ("objectdiagram o { a { x = 1; x = 2; } }", "assigned twice"),
    ],
)
def test_od_context_conditions(text, fragment):
    with pytest.raises(DiagramError) as e:
        parse_od(text)
    assert any(fragment in d.message for d in e.value.diagnostics)


@pytest.mark.parametrize("name", ["cd1.cd", "cd1p.cd", "cd2.cd"])
def test_print_cd_parses_back(name):
    cd = read_cd(FIXTURES / name)
    assert structurally_equal(parse_cd(print_cd(cd)), cd)


def test_print_all_constructs_parses_back():
    cd = parse_cd(CD_WITH_EVERYTHING)
    assert structurally_equal(parse_cd(print_cd(cd)), cd)


def test_print_od_parses_back():
    od = parse_od((FIXTURES / "od2.od").read_text())
    assert structurally_equal(parse_od(print_od(od)), od)
    assert print_od(od, witness=True).startswith("witness objectdiagram od2")


def test_date_shaped_string_survives_printing():
    od = ObjectDiagram(name="d", objects=(
        ObjDecl(name="a", declared_type="Doc", attributes=(
            AttributeAssignment(name="code", value=Value.str_("2024-01-01")),
            AttributeAssignment(name="due", value=Value.date("2024-03-01")),
        )),
    ))
    text = print_od(od)
    assert '"2024\\u002d01-01"' in text
    assert '"2024-03-01"' in text
    again = parse_od(text)
    assert structurally_equal(again, od)
    values = {a.name: a.value for a in again.objects[0].attributes}
    assert values["code"].kind == "str"
    assert values["due"].kind == "date"
