from cdod.diagrams.parser import parse_cd, parse_od, read_cd, read_od
from cdod.diagrams.printer import print_cd, print_od
from cdod.diagrams.resolve import ResolvedCD, ResolvedPair, resolve, resolve_cd

__all__ = [
    "parse_cd",
    "parse_od",
    "read_cd",
    "read_od",
    "print_cd",
    "print_od",
    "resolve",
    "resolve_cd",
    "ResolvedCD",
    "ResolvedPair",
]
