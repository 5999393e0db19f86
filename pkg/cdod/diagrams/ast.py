"""
Abstract syntax of the class diagram (CD) and object diagram (OD) languages.

All nodes are frozen pydantic models; collections are tuples so that a
diagram can be shared between threads and worker processes unchanged.
"""

import re
from datetime import date
from enum import Enum
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class PrimitiveType(str, Enum):
    INT = "int"
    BOOLEAN = "boolean"
    STRING = "String"
    DATE = "Date"


PRIMITIVE_NAMES = {p.value: p for p in PrimitiveType}

ISO_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def is_calendar_date(text: str) -> bool:
    """True for YYYY-MM-DD texts naming a day that exists."""
    if not ISO_DATE.match(text):
        return False
    try:
        date.fromisoformat(text)
    except ValueError:
        return False
    return True


_VALUE_KINDS = {
    PrimitiveType.INT: "int",
    PrimitiveType.BOOLEAN: "bool",
    PrimitiveType.STRING: "str",
    PrimitiveType.DATE: "date",
}


class _Node(BaseModel):
    model_config = ConfigDict(frozen=True)


class Value(_Node):
    """An attribute value: an OD literal or a value carried by an OM object."""

    kind: Literal["int", "bool", "str", "date", "enum"]
    data: Union[bool, int, str]
    enum: Optional[str] = None

    @classmethod
    def int_(cls, value: int) -> "Value":
        return cls(kind="int", data=value)

    @classmethod
    def bool_(cls, value: bool) -> "Value":
        return cls(kind="bool", data=value)

    @classmethod
    def str_(cls, value: str) -> "Value":
        return cls(kind="str", data=value)

    @classmethod
    def date(cls, value: str) -> "Value":
        return cls(kind="date", data=value)

    @classmethod
    def enum_(cls, enum: str, literal: str) -> "Value":
        return cls(kind="enum", data=literal, enum=enum)

    def matches(self, other: "Value") -> bool:
        """Literal equality; quoted strings and dates compare by their text."""
        if self == other:
            return True
        return {self.kind, other.kind} == {"str", "date"} and self.data == other.data

    def __str__(self) -> str:
        if self.kind == "enum":
            return f"{self.enum}.{self.data}"
        if self.kind == "bool":
            return "true" if self.data else "false"
        return str(self.data)


class AttrType(_Node):
    """Either a primitive type or a reference to a declared enumeration."""

    primitive: Optional[PrimitiveType] = None
    enum: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.primitive is None) == (self.enum is None):
            raise ValueError("AttrType needs exactly one of primitive or enum")
        return self

    @classmethod
    def named(cls, name: str) -> "AttrType":
        if name in PRIMITIVE_NAMES:
            return cls(primitive=PRIMITIVE_NAMES[name])
        return cls(enum=name)

    @property
    def name(self) -> str:
        return self.primitive.value if self.primitive is not None else self.enum

    def accepts(self, value: Value, literals: Optional[tuple[str, ...]] = None) -> bool:
        """
        Whether the value belongs to this type. For an enumeration, `literals` are the
        declared literals; without them only the enumeration name is compared.
        """
        if self.enum is not None:
            if value.kind != "enum" or value.enum != self.enum:
                return False
            return literals is None or value.data in literals
        return value.kind == _VALUE_KINDS[self.primitive]

    def coerce(self, value: Value) -> Value:
        """Reinterpret a quoted literal as String or Date to fit this type."""
        if self.primitive == PrimitiveType.STRING and value.kind == "date":
            return Value.str_(value.data)
        if self.primitive == PrimitiveType.DATE and value.kind == "str" and is_calendar_date(value.data):
            return Value.date(value.data)
        return value

    def __str__(self) -> str:
        return self.name


class AttributeDecl(_Node):
    name: str
    type: AttrType


class ClassDecl(_Node):
    name: str
    is_abstract: bool = False
    is_singleton: bool = False
    superclass: Optional[str] = None
    interfaces: tuple[str, ...] = ()
    attributes: tuple[AttributeDecl, ...] = ()

    @model_validator(mode="after")
    def _check_class(self):
        if self.is_abstract and self.is_singleton:
            raise ValueError(f"class {self.name} cannot be both abstract and singleton")
        names = [a.name for a in self.attributes]
        if len(names) != len(set(names)):
            raise ValueError(f"class {self.name} declares an attribute twice")
        return self


class InterfaceDecl(_Node):
    name: str
    extends: tuple[str, ...] = ()


class EnumDecl(_Node):
    name: str
    literals: tuple[str, ...]


class Multiplicity(_Node):
    lower: int = Field(default=0, ge=0)
    upper: Optional[int] = Field(default=None, description="None means unbounded (*)")

    @model_validator(mode="after")
    def _ordered(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError(f"multiplicity lower bound {self.lower} exceeds upper bound {self.upper}")
        return self

    def admits(self, count: int) -> bool:
        return count >= self.lower and (self.upper is None or count <= self.upper)

    def __str__(self) -> str:
        if self.upper is None:
            return "[*]" if self.lower == 0 else f"[{self.lower}..*]"
        if self.lower == self.upper:
            return f"[{self.lower}]"
        return f"[{self.lower}..{self.upper}]"


AssocKind = Literal["association", "aggregation", "composition"]
Navigability = Literal["leftToRight", "rightToLeft", "both"]


class AssocDecl(_Node):
    kind: AssocKind = "association"
    left_class: str
    left_role: str
    left_mult: Multiplicity = Multiplicity()
    right_class: str
    right_role: str
    right_mult: Multiplicity = Multiplicity()
    navigability: Navigability = "both"

    @model_validator(mode="after")
    def _whole_navigates(self):
        if self.kind == "composition" and self.navigability == "rightToLeft":
            raise ValueError(
                f"composition {self.left_class}->{self.right_class} must be navigable from the whole (left) side"
            )
        return self


class ClassDiagram(_Node):
    name: str
    classes: tuple[ClassDecl, ...] = ()
    interfaces: tuple[InterfaceDecl, ...] = ()
    enums: tuple[EnumDecl, ...] = ()
    associations: tuple[AssocDecl, ...] = ()

    def class_named(self, name: str) -> Optional[ClassDecl]:
        return next((c for c in self.classes if c.name == name), None)

    def enum_named(self, name: str) -> Optional[EnumDecl]:
        return next((e for e in self.enums if e.name == name), None)


class AttributeAssignment(_Node):
    name: str
    value: Value


class ObjDecl(_Node):
    name: str
    declared_type: Optional[str] = None
    attributes: tuple[AttributeAssignment, ...] = ()


class LinkDecl(_Node):
    source: str
    role: str
    target: str


class ObjectDiagram(_Node):
    name: str
    objects: tuple[ObjDecl, ...] = ()
    links: tuple[LinkDecl, ...] = ()

    def object_named(self, name: str) -> Optional[ObjDecl]:
        return next((o for o in self.objects if o.name == name), None)


def _canonical(data):
    if isinstance(data, dict):
        return {k: _canonical(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        items = [_canonical(v) for v in data]
        if items and all(isinstance(v, dict) for v in items):
            return sorted(items, key=repr)
        return items
    return data


def structurally_equal(a: _Node, b: _Node) -> bool:
    """Equality that compares member and link collections as multisets."""
    return type(a) is type(b) and _canonical(a.model_dump()) == _canonical(b.model_dump())
