"""Canonical textual form of class and object diagrams (inverse of the parsers)."""

import json

from cdod.diagrams.ast import AssocDecl, ClassDecl, ClassDiagram, ObjDecl, ObjectDiagram, Value, is_calendar_date

_ARROWS = {"both": "<->", "leftToRight": "->", "rightToLeft": "<-"}


def _class(c: ClassDecl) -> str:
    head = "class " + c.name
    if c.is_abstract:
        head = "abstract " + head
    elif c.is_singleton:
        head = "singleton " + head
    if c.superclass:
        head += f" extends {c.superclass}"
    if c.interfaces:
        head += " implements " + ", ".join(c.interfaces)
    if not c.attributes:
        return f"  {head};"
    body = "".join(f"    {a.type.name} {a.name};\n" for a in c.attributes)
    return f"  {head} {{\n{body}  }}"


def _association(a: AssocDecl) -> str:
    return (
        f"  {a.kind} {a.left_mult} {a.left_class} ({a.left_role}) {_ARROWS[a.navigability]} "
        f"({a.right_role}) {a.right_class} {a.right_mult};"
    )


def print_cd(cd: ClassDiagram) -> str:
    lines = [f"classdiagram {cd.name} {{"]
    lines += [f"  enum {e.name} {{{', '.join(e.literals)};}}" for e in cd.enums]
    for i in cd.interfaces:
        lines.append(f"  interface {i.name} extends {', '.join(i.extends)};" if i.extends else f"  interface {i.name};")
    lines += [_class(c) for c in cd.classes]
    lines += [_association(a) for a in cd.associations]
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_value(value: Value) -> str:
    """OD literal syntax of a value."""
    if value.kind == "bool":
        return "true" if value.data else "false"
    if value.kind == "int":
        return str(value.data)
    if value.kind == "enum":
        return f"{value.enum}.{value.data}"
    if value.kind == "str" and is_calendar_date(value.data):
        # an escaped hyphen keeps a date-shaped String from reading back as a Date
        return json.dumps(value.data).replace("-", "\\u002d", 1)
    return json.dumps(value.data)


def _object(o: ObjDecl) -> str:
    head = f"{o.name}:{o.declared_type}" if o.declared_type else o.name
    if not o.attributes:
        return f"  {head};"
    body = "".join(f"    {a.name} = {format_value(a.value)};\n" for a in o.attributes)
    return f"  {head} {{\n{body}  }}"


def print_od(od: ObjectDiagram, witness: bool = False) -> str:
    lines = [f"{'witness ' if witness else ''}objectdiagram {od.name} {{"]
    lines += [_object(o) for o in od.objects]
    lines += [f"  link {l.role} {l.source} -> {l.target};" for l in od.links]
    lines.append("}")
    return "\n".join(lines) + "\n"
