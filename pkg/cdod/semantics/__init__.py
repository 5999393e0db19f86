from cdod.semantics.membership import cd_violations, find_embedding, in_intersection, in_sem_cd, in_sem_od
from cdod.semantics.object_model import Link, ObjectModel, ObjInstance, om_well_formed

__all__ = [
    "cd_violations",
    "find_embedding",
    "in_intersection",
    "in_sem_cd",
    "in_sem_od",
    "Link",
    "ObjectModel",
    "ObjInstance",
    "om_well_formed",
]
