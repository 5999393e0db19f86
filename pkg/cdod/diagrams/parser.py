"""
Lark based parsers for the textual class diagram and object diagram languages.

Grammar files live next to this module in grammar/. Syntax errors and
context-condition violations are reported as a DiagramError carrying
line/column diagnostics.
"""

import json
import logging
from pathlib import Path

from lark import Lark, Token, Transformer, UnexpectedCharacters, UnexpectedEOF, UnexpectedInput
from lark.exceptions import UnexpectedToken, VisitError

from cdod.diagrams.ast import (
    AssocDecl,
    AttrType,
    AttributeAssignment,
    AttributeDecl,
    ClassDecl,
    ClassDiagram,
    EnumDecl,
    InterfaceDecl,
    LinkDecl,
    Multiplicity,
    ObjDecl,
    ObjectDiagram,
    Value,
    is_calendar_date,
)
from cdod.diagrams.checks import Positions, assoc_position_key, check_class_diagram
from cdod.errors import Diagnostic, DiagramError

logger = logging.getLogger(__name__)

_GRAMMAR_DIR = Path(__file__).with_name("grammar")

_NAVIGABILITY = {"<->": "both", "->": "leftToRight", "<-": "rightToLeft"}


def _load_grammar(file_name: str) -> Lark:
    return Lark(
        (_GRAMMAR_DIR / file_name).read_text(encoding="utf-8"),
        parser="lalr",
        propagate_positions=True,
        maybe_placeholders=False,
    )


_cd_parser = _load_grammar("cd.lark")
_od_parser = _load_grammar("od.lark")


def describe_unexpected(error: UnexpectedInput) -> str:
    if isinstance(error, UnexpectedToken):
        if error.token.type == "$END":
            return "unexpected end of input"
        expected = ", ".join(sorted(error.expected))
        return f"unexpected '{error.token}', expected one of: {expected}"
    if isinstance(error, UnexpectedCharacters):
        return f"unexpected character {error.char!r}"
    if isinstance(error, UnexpectedEOF):
        return "unexpected end of input"
    return str(error).splitlines()[0]


def run_parser(parser: Lark, text: str, transformer: Transformer, source: str):
    """Parse and transform, converting every Lark failure into a DiagramError."""
    try:
        tree = parser.parse(text)
    except UnexpectedInput as e:
        line = e.line if e.line and e.line > 0 else None
        column = e.column if e.column and e.column > 0 else None
        raise DiagramError([Diagnostic.error(describe_unexpected(e), line, column)], source) from None
    try:
        return transformer.transform(tree)
    except VisitError as e:
        raise DiagramError([Diagnostic.error(str(e.orig_exc))], source) from None


class _CollectingTransformer(Transformer):
    def __init__(self):
        super().__init__()
        self.diagnostics: list[Diagnostic] = []
        self.positions: Positions = {}

    def _error(self, message: str, token: Token) -> None:
        self.diagnostics.append(Diagnostic.error(message, token.line, token.column))

    def _record(self, key: str, token: Token) -> None:
        self.positions.setdefault(key, []).append((token.line, token.column))


class _CdTransformer(_CollectingTransformer):
    def start(self, items):
        name, *members = items
        associations = tuple(m for m in members if isinstance(m, AssocDecl))
        return ClassDiagram(
            name=str(name),
            classes=tuple(m for m in members if isinstance(m, ClassDecl)),
            interfaces=tuple(m for m in members if isinstance(m, InterfaceDecl)),
            enums=tuple(m for m in members if isinstance(m, EnumDecl)),
            associations=associations,
        )

    def name_list(self, items):
        return list(items)

    def enum_decl(self, items):
        name, *literals = items
        self._record(str(name), name)
        unique: list[str] = []
        for literal in literals:
            if str(literal) in unique:
                self._error(f"enum {name} declares literal '{literal}' twice", literal)
                continue
            unique.append(str(literal))
        return EnumDecl(name=str(name), literals=tuple(unique))

    def interface_extends(self, items):
        return ("extends", items[0])

    def interface_decl(self, items):
        name = items[0]
        self._record(str(name), name)
        extends = tuple(str(t) for t in items[1][1]) if len(items) > 1 else ()
        return InterfaceDecl(name=str(name), extends=extends)

    def class_modifier(self, items):
        return ("modifier", str(items[0]))

    def extends_clause(self, items):
        return ("extends", str(items[0]))

    def implements_clause(self, items):
        return ("implements", tuple(str(t) for t in items[0]))

    def class_body(self, items):
        return ("body", list(items))

    def attribute(self, items):
        type_token, name_token = items
        return name_token, AttributeDecl(name=str(name_token), type=AttrType.named(str(type_token)))

    def class_decl(self, items):
        parts = {"modifier": None, "extends": None, "implements": (), "body": []}
        name = None
        for item in items:
            if isinstance(item, Token):
                name = item
            else:
                parts[item[0]] = item[1]
        self._record(str(name), name)
        attributes: list[AttributeDecl] = []
        for token, attribute in parts["body"]:
            if any(a.name == attribute.name for a in attributes):
                self._error(f"attribute '{attribute.name}' declared twice in class {name}", token)
                continue
            attributes.append(attribute)
        return ClassDecl(
            name=str(name),
            is_abstract=parts["modifier"] == "abstract",
            is_singleton=parts["modifier"] == "singleton",
            superclass=parts["extends"],
            interfaces=parts["implements"],
            attributes=tuple(attributes),
        )

    def assoc_kind(self, items):
        return ("kind", str(items[0]))

    def arrow(self, items):
        return ("arrow", _NAVIGABILITY[str(items[0])])

    def mult_range(self, items):
        lower, upper = int(items[0]), int(items[1])
        if lower > upper:
            self._error(f"multiplicity [{lower}..{upper}] has lower bound above upper bound", items[0])
            return Multiplicity(lower=upper, upper=upper)
        return Multiplicity(lower=lower, upper=upper)

    def mult_lower(self, items):
        return Multiplicity(lower=int(items[0]))

    def mult_exact(self, items):
        return Multiplicity(lower=int(items[0]), upper=int(items[0]))

    def mult_any(self, items):
        return Multiplicity()

    def assoc_decl(self, items):
        kind = items[0][1]
        rest = list(items[1:])
        left_mult = rest.pop(0) if isinstance(rest[0], Multiplicity) else Multiplicity()
        left_class, left_role, (_, navigability), right_role, right_class = rest[:5]
        right_mult = rest[5] if len(rest) > 5 else Multiplicity()
        index = sum(len(v) for k, v in self.positions.items() if k.startswith("@association"))
        self._record(assoc_position_key(index), left_class)
        if kind == "composition" and navigability == "rightToLeft":
            self._error("a composition must be navigable from its whole (left) side", left_class)
            navigability = "leftToRight"
        return AssocDecl(
            kind=kind,
            left_class=str(left_class),
            left_role=str(left_role),
            left_mult=left_mult,
            right_class=str(right_class),
            right_role=str(right_role),
            right_mult=right_mult,
            navigability=navigability,
        )


class _OdTransformer(_CollectingTransformer):
    def start(self, items):
        items = [i for i in items if not (isinstance(i, Token) and i.type == "WITNESS")]
        name, *members = items
        objects = [m[1] for m in members if m[0] == "object"]
        declared = {o.name for o in objects}
        links = []
        for member in members:
            if member[0] != "link":
                continue
            _, token, link = member
            missing = [n for n in (link.source, link.target) if n not in declared]
            for n in missing:
                self._error(f"link {link.role} refers to undeclared object '{n}'", token)
            if not missing:
                links.append(link)
        return ObjectDiagram(name=str(name), objects=tuple(objects), links=tuple(links))

    def object_type(self, items):
        return ("type", str(items[0]))

    def object_body(self, items):
        return ("body", list(items))

    def assignment(self, items):
        name, value = items
        return name, AttributeAssignment(name=str(name), value=value)

    def object_decl(self, items):
        name = items[0]
        if str(name) in self.positions:
            self._error(f"duplicate object name '{name}'", name)
        self._record(str(name), name)
        declared_type = None
        assignments: list[AttributeAssignment] = []
        for kind, payload in items[1:]:
            if kind == "type":
                declared_type = payload
                continue
            for token, assignment in payload:
                if any(a.name == assignment.name for a in assignments):
                    self._error(f"attribute '{assignment.name}' assigned twice on object {name}", token)
                    continue
                assignments.append(assignment)
        return "object", ObjDecl(name=str(name), declared_type=declared_type, attributes=tuple(assignments))

    def link_decl(self, items):
        role, source, target = items
        return "link", role, LinkDecl(source=str(source), role=str(role), target=str(target))

    def int_lit(self, items):
        return Value.int_(int(items[0]))

    def true_lit(self, items):
        return Value.bool_(True)

    def false_lit(self, items):
        return Value.bool_(False)

    def string_lit(self, items):
        raw = str(items[0])[1:-1]
        try:
            text = json.loads(items[0])
        except ValueError:
            text = raw
        # only a date written out plainly is a Date; "2024\u002d01-01" stays a String
        if is_calendar_date(raw):
            return Value.date(text)
        return Value.str_(text)

    def enum_lit(self, items):
        return Value.enum_(str(items[0]), str(items[1]))


def parse_cd(text: str) -> ClassDiagram:
    """
    Parse the textual form of a class diagram.

    Raises:
        DiagramError: on syntax errors, duplicate names, unresolved references
            or inheritance cycles
    """
    transformer = _CdTransformer()
    cd = run_parser(_cd_parser, text, transformer, "class diagram")
    diagnostics = transformer.diagnostics + check_class_diagram(cd, transformer.positions)
    if diagnostics:
        raise DiagramError(diagnostics, "class diagram")
    logger.debug(
        "parsed class diagram %s: %d classes, %d interfaces, %d enums, %d associations",
        cd.name, len(cd.classes), len(cd.interfaces), len(cd.enums), len(cd.associations),
    )
    return cd


def parse_od(text: str) -> ObjectDiagram:
    """
    Parse the textual form of an object diagram (or of a witness).

    Raises:
        DiagramError: on syntax errors, duplicate object names or links to undeclared objects
    """
    transformer = _OdTransformer()
    od = run_parser(_od_parser, text, transformer, "object diagram")
    if transformer.diagnostics:
        raise DiagramError(transformer.diagnostics, "object diagram")
    logger.debug("parsed object diagram %s: %d objects, %d links", od.name, len(od.objects), len(od.links))
    return od


def read_cd(path) -> ClassDiagram:
    return parse_cd(Path(path).read_text(encoding="utf-8"))


def read_od(path) -> ObjectDiagram:
    return parse_od(Path(path).read_text(encoding="utf-8"))
