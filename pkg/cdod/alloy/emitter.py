"""
Emit the configurable Alloy module for a CD/OD pair.

The module is for inspection and external cross-checking only; nothing here runs
Alloy. Feature predicates are instantiated in `pred cd` and `pred od` exactly when
the configuration selects the feature.
"""

import logging
import re
from typing import Optional

from jinja2 import Environment, PackageLoader, StrictUndefined

from cdod.config.analysis_config import AnalysisSettings
from cdod.diagrams.ast import AttrType, Value
from cdod.diagrams.resolve import ResolvedPair, RoleInfo
from cdod.engines.scope import compute_scope
from cdod.features.semantic_config import SemanticConfig

logger = logging.getLogger(__name__)

INT_BITWIDTH = 4

_env = Environment(
    loader=PackageLoader("cdod.alloy", "templates"),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)

_TYPE_SIGS = {"int": "type_Int", "bool": "type_Boolean", "str": "type_String", "date": "type_Date"}


def subs(type_name: str) -> str:
    return f"{type_name}Subs"


def type_sig(attr_type: AttrType) -> str:
    if attr_type.enum is not None:
        return f"{attr_type.enum}Enum"
    return f"type_{attr_type.name[0].upper()}{attr_type.name[1:]}"


def _sanitize(text: str) -> str:
    return re.sub(r"\W", "_", text)


class ValueAtoms:
    """Alloy atom names for the attribute values shown in the object diagram."""

    def __init__(self, pair: ResolvedPair):
        self.names: dict[Value, str] = {}
        self.parents: dict[str, str] = {}
        taken: set[str] = set()
        literals = [Value.enum_(e.name, lit) for e in pair.cd.enums for lit in e.literals]
        for value in literals + list(pair.od_values.values()):
            if value in self.names:
                continue
            label = value.enum if value.kind == "enum" else _TYPE_SIGS[value.kind][len("type_"):]
            name = f"val_{label}_{_sanitize(str(value.data).lower() if value.kind == 'bool' else str(value.data))}"
            while name in taken:
                name += "_"
            taken.add(name)
            self.names[value] = name
            self.parents[name] = self._parent(pair, value)

    @staticmethod
    def _parent(pair: ResolvedPair, value: Value) -> str:
        if value.kind != "enum":
            return _TYPE_SIGS[value.kind]
        # literals the CD does not declare belong to no enumeration signature
        if value.data in pair.enum_literals(value.enum):
            return f"{value.enum}Enum"
        return "EnumVal"

    def __getitem__(self, value: Value) -> str:
        return self.names[value]


def _close(lines: list[str]) -> None:
    if lines[-1].startswith("//"):
        lines.append("}")
    else:
        lines[-1] += " }"


def _join(names, sep: str = " + ") -> str:
    names = list(names)
    return sep.join(names) if names else "none"


def _association_lines(info: RoleInfo, reverse: RoleInfo) -> list[str]:
    """`info` is the navigable direction; for a bidirectional association the left-to-right one."""
    src, role, tgt = subs(info.source), info.role, subs(info.target)
    lines = []
    if info.bidirectional:
        lines.append(f"BidiAssoc[{src}, {role}, {tgt}, {reverse.role}]")
        for direction in (reverse, info):
            lines.append(_bounded(direction, "ObjLUAttrib", "ObjLAttrib"))
    else:
        lines.append(_bounded(info, "ObjLUAttrib", "ObjLAttrib"))
        low, up = info.in_mult.lower, info.in_mult.upper
        if up is None:
            lines.append(f"ObjL[{tgt}, {role}, {src}, {low}]")
        else:
            lines.append(f"ObjLU[{tgt}, {role}, {src}, {low}, {up}]")
    if info.whole_to_part or reverse.whole_to_part:
        whole = info if info.whole_to_part else reverse
        lines.append(f"Composition[{subs(whole.source)}, {whole.role}, {subs(whole.target)}]")
    return lines


def _bounded(info: RoleInfo, bounded: str, unbounded: str) -> str:
    mult = info.out_mult
    head = f"{subs(info.source)}, {info.role}, {subs(info.target)}, {mult.lower}"
    if mult.upper is None:
        return f"{unbounded}[{head}]"
    return f"{bounded}[{head}, {mult.upper}]"


def emit_cd_pred(pair: ResolvedPair, config: SemanticConfig) -> str:
    """The `pred <cd-name>` block with the CD feature predicates the configuration selects."""
    cd = pair.cd
    concrete = pair.concrete_classes
    lines = [f"pred {cd.name} {{", "// Definition of class attributes"]
    for cls in concrete:
        for attribute in pair.flattened_attributes[cls]:
            lines.append(f"ObjAttrib[{cls}, {attribute.name}, {type_sig(attribute.type)}]")

    lines.append("// Associations")
    for index in range(len(cd.associations)):
        ltr = next(i for i in pair.directions if i.assoc_index == index and i.direction == "leftToRight")
        rtl = next(i for i in pair.directions if i.assoc_index == index and i.direction == "rightToLeft")
        if ltr.navigable:
            lines += _association_lines(ltr, rtl)
        elif rtl.navigable:
            lines += _association_lines(rtl, ltr)

    hidden = [c.name for c in cd.classes if c.is_abstract] + [i.name for i in cd.interfaces]
    if hidden:
        lines.append("// Abstract classes and interfaces have no direct instances")
        lines += [f"no {name}" for name in hidden]
    singletons = pair.singleton_classes()
    if singletons:
        lines.append("// Singleton classes")
        lines += [f"singletonCD[{name}]" for name in singletons]

    lines.append("// Semantic variation feature: cd completeness")
    feature = "allAttribShownCD" if config.cd_attributes_complete else "allowMoreAttribCD"
    for cls in concrete:
        fields = [a.name for a in pair.flattened_attributes[cls]] + [i.role for i in pair.outgoing_roles(cls)]
        lines.append(f"{feature}[{cls}, {_join(dict.fromkeys(fields), '+')}]")
    if config.cd_classes_complete:
        lines.append(f"allClassesShownCD[{_join(concrete, '+')}]")
    if config.cd_empty_om_invalid:
        lines.append("// Semantic variation feature: empty OM")
        lines.append("emptyOMNotValidCD")
    _close(lines)
    return "\n".join(lines)


def emit_od_pred(pair: ResolvedPair, config: SemanticConfig, atoms: Optional[ValueAtoms] = None) -> str:
    """The `pred <od-name>` block with the OD feature predicates the configuration selects."""
    od = pair.od
    atoms = atoms or ValueAtoms(pair)
    names = pair.od_objects
    lines = [f"pred {od.name} {{"]
    clauses: list[str] = []

    def clause(text: str) -> None:
        clauses.append(text)
        lines.append(text if len(clauses) == 1 else f"and {text}")

    if names:
        lines.append(" | ".join(f"some {n}: Obj" for n in names) + " |")
        clause(f"# {{{_join(names)}}} = {len(names)}")

    groups: dict[tuple[str, str], list[str]] = {}
    untyped = []
    for n in names:
        status = pair.od_type_status[n]
        if status.kind == "untyped":
            untyped.append(n)
        elif status.kind == "unknown" or config.od_strict_typing:
            groups.setdefault(("strictTypingOD", status.type_name), []).append(n)
        else:
            groups.setdefault(("nonStrictTypingOD", subs(status.type_name)), []).append(n)
    if groups or (untyped and config.od_types_complete):
        lines.append("// Semantic variation feature: object typing")
        for (pred, target), members in groups.items():
            clause(f"{pred}[{_join(members)}, {target}]")
        if untyped and config.od_types_complete:
            clause(f"allTypesShownOD[{_join(untyped)}]")

    if pair.od_values:
        lines.append("// Attribute values")
        for (n, attribute), value in pair.od_values.items():
            clause(f"{n}.get[{attribute}] = {atoms[value]}")

    completeness = config.od_links_complete or config.od_attributes_complete or config.od_objects_complete
    if completeness or pair.shown_links:
        lines.append("// Semantic variation feature: OD completeness")
    if config.od_links_complete:
        for n in names:
            clause(f"allLinksShownOD[{n}, {_join(pair.shown_roles(n))}]")
    partners_pred = "allLinksShownODCmplt" if config.od_links_complete else "allLinksShownODIncmlt"
    seen = set()
    for link in pair.shown_links:
        if (link.source, link.role) in seen:
            continue
        seen.add((link.source, link.role))
        partners = pair.shown_partners(link.source, link.role)
        target = partners[0] if len(partners) == 1 else f"{{{_join(partners)}}}"
        clause(f"{partners_pred}[{link.source}, {link.role}, {target}]")
    if config.od_attributes_complete:
        for n in names:
            shown = [a.name for a in od.object_named(n).attributes]
            clause(f"allAttribShownOD[{n}, {_join(shown)}]")
    if config.od_objects_complete:
        if names:
            clause(f"allObjectsShownOD[{_join(names)}]")
        else:
            clause("no Obj - (FName + auxiliary + Val + EnumVal + Int)")

    if config.od_empty_om_invalid:
        lines.append("// Semantic variation feature: empty OM")
        clause("emptyOMNotValidOD")
    if not clauses:
        lines.append("some univ or no univ")
    _close(lines)
    return "\n".join(lines)


def _field_names(pair: ResolvedPair) -> list[str]:
    names = [a.name for attributes in pair.flattened_attributes.values() for a in attributes]
    names += [info.role for info in pair.directions]
    names += [attribute for (_, attribute) in pair.od_values]
    names += [link.role for link in pair.shown_links]
    return list(dict.fromkeys(names))


def emit_module(
    pair: ResolvedPair,
    config: SemanticConfig,
    settings: Optional[AnalysisSettings] = None,
) -> str:
    """
    Render the complete Alloy module: foundational signatures, subclass functions,
    the predicate library, `pred cd`, `pred od`, `pred consistentCDOD` and the run command.
    """
    scope, _ = compute_scope(pair, config, settings)
    atoms = ValueAtoms(pair)
    cd = pair.cd
    type_names = [c.name for c in cd.classes] + [i.name for i in cd.interfaces]
    text = _env.get_template("module.als.j2").render(
        module_name=_sanitize(f"{cd.name}_{pair.od.name}"),
        config=config,
        field_names=_field_names(pair),
        type_sigs=[type_sig(AttrType.named(p)) for p in ("int", "boolean", "String", "Date")],
        enums=[(f"{e.name}Enum", [a for a, p in atoms.parents.items() if p == f"{e.name}Enum"]) for e in cd.enums],
        value_atoms=[
            (name, parent) for name, parent in atoms.parents.items()
            if parent.startswith("type_") or parent == "EnumVal"
        ],
        type_names=type_names,
        foreign_types=list(pair.unknown_types),
        subclass_functions=[(subs(t), list(pair.descendants[t])) for t in type_names],
        cd_name=cd.name,
        od_name=pair.od.name,
        cd_pred=emit_cd_pred(pair, config),
        od_pred=emit_od_pred(pair, config, atoms),
        run_scope=max(1, scope.bound()),
        int_bitwidth=INT_BITWIDTH,
    )
    logger.debug("emitted Alloy module for %s/%s (%d lines)", cd.name, pair.od.name, text.count("\n"))
    return text
