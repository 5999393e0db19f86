from cdod.diagrams.resolve import ResolvedPair
from cdod.errors import Diagnostic
from cdod.features.semantic_config import SemanticConfig


def compatibility(config: SemanticConfig, pair: ResolvedPair) -> list[Diagnostic]:
    """
    Report configuration/diagram combinations that make the pair inconsistent
    before any search is run. An empty list means nothing is known in advance.
    """
    diagnostics = []
    untyped = [o for o, s in pair.od_type_status.items() if s.kind == "untyped"]
    if untyped and config.od_types_complete:
        diagnostics.append(Diagnostic(
            severity="warning",
            message=f"untyped object under types=complete: {', '.join(untyped)} "
                    f"(od.types=complete admits no untyped objects, the pair is inconsistent)",
        ))
    if pair.unknown_types and config.cd_classes_complete:
        diagnostics.append(Diagnostic.note(
            f"unknown type under classes=complete: {', '.join(pair.unknown_types)} "
            f"(no object model of {pair.cd.name} has objects of classes it does not show)"
        ))
    return diagnostics
