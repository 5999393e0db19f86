"""Well-formedness (context) conditions of class diagrams."""

from collections import Counter
from typing import Optional

from cdod.diagrams.ast import ClassDiagram
from cdod.errors import Diagnostic

Positions = dict[str, list[tuple[int, int]]]


def assoc_position_key(index: int) -> str:
    return f"@association{index}"


def check_class_diagram(cd: ClassDiagram, positions: Optional[Positions] = None) -> list[Diagnostic]:
    """
    Check the CD invariants that cannot be expressed by the grammar.

    Args:
        cd: the diagram to check
        positions: declaration positions by name, in source order (as recorded by the parser)

    Returns:
        list[Diagnostic]: empty iff the diagram is well formed
    """
    positions = positions or {}
    diagnostics: list[Diagnostic] = []

    def error(message: str, key: str, index: int = 0) -> None:
        found = positions.get(key, [])
        line, column = found[index] if found and -len(found) <= index < len(found) else (None, None)
        diagnostics.append(Diagnostic.error(message, line, column))

    declarations = (
        [(e.name, "enum") for e in cd.enums]
        + [(i.name, "interface") for i in cd.interfaces]
        + [(c.name, "class") for c in cd.classes]
    )
    for name, count in Counter(name for name, _ in declarations).items():
        if count > 1:
            error(f"duplicate name '{name}'", name, -1)
    kinds = dict(declarations)

    def expect(ref: str, wanted: tuple[str, ...], key: str, where: str) -> bool:
        kind = kinds.get(ref)
        if kind is None:
            error(f"unresolved reference '{ref}' in {where}", key)
            return False
        if kind not in wanted:
            error(f"'{ref}' is a {kind}, expected {' or '.join(wanted)} in {where}", key)
            return False
        return True

    for c in cd.classes:
        if c.superclass is not None:
            expect(c.superclass, ("class",), c.name, f"class {c.name}")
        for iface in c.interfaces:
            expect(iface, ("interface",), c.name, f"class {c.name}")
        for attr in c.attributes:
            if attr.type.enum is not None:
                expect(attr.type.enum, ("enum",), c.name, f"attribute {c.name}.{attr.name}")
    for iface in cd.interfaces:
        for parent in iface.extends:
            expect(parent, ("interface",), iface.name, f"interface {iface.name}")
    for index, assoc in enumerate(cd.associations):
        key = assoc_position_key(index)
        for end in (assoc.left_class, assoc.right_class):
            expect(end, ("class", "interface"), key, f"association ({assoc.left_role})/({assoc.right_role})")

    parents: dict[str, list[str]] = {}
    for c in cd.classes:
        parents[c.name] = [c.superclass] if kinds.get(c.superclass) == "class" else []
    for iface in cd.interfaces:
        parents[iface.name] = [p for p in iface.extends if kinds.get(p) == "interface"]
    cycle = _find_cycle(parents)
    if cycle:
        error(f"inheritance cycle: {' -> '.join(cycle)}", cycle[0])
        return diagnostics

    classes = {c.name: c for c in cd.classes}
    for c in cd.classes:
        inherited = {}
        ancestor = classes.get(c.superclass) if c.superclass else None
        while ancestor is not None:
            for attr in ancestor.attributes:
                inherited.setdefault(attr.name, attr.type)
            ancestor = classes.get(ancestor.superclass) if ancestor.superclass else None
        for attr in c.attributes:
            if attr.name in inherited and inherited[attr.name] != attr.type:
                error(
                    f"attribute {c.name}.{attr.name} redeclares an inherited attribute with type "
                    f"{attr.type} instead of {inherited[attr.name]}",
                    c.name,
                )
    return diagnostics


def _find_cycle(parents: dict[str, list[str]]) -> Optional[list[str]]:
    state: dict[str, int] = {}
    path: list[str] = []

    def visit(node: str) -> Optional[list[str]]:
        state[node] = 1
        path.append(node)
        for parent in parents.get(node, []):
            if state.get(parent) == 1:
                return path[path.index(parent):] + [parent]
            if parent not in state:
                found = visit(parent)
                if found:
                    return found
        path.pop()
        state[node] = 2
        return None

    for node in parents:
        if node not in state:
            found = visit(node)
            if found:
                return found
    return None
