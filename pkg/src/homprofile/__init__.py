"""Left homomorphism profiles of labeled transition systems and the modal
equivalences they capture."""

from .enumeration import EnumerationBudgetError, all_structures, enumerate_class, random_structure
from .harness import THEOREMS, TheoremReport, negative_demo, verify_theorem
from .homs import (
    ConjunctiveQuery,
    ProfileVerdict,
    canonical_instance,
    compare_profiles,
    count_hom_maps,
    count_homs,
    enumerate_homs,
    ext_membership,
    hom_count_matrix,
    morphism_check,
)
from .semiring import BOOL, NAT, Semiring, analyze_periodicity, count_in, min_plus, mod_p, parse_semiring
from .structures import (
    ClassKind,
    ClassTag,
    Signature,
    Structure,
    StructureError,
    canonical_code,
    classify,
    from_json,
    structure,
    to_json,
)
from .transforms import (
    backward_expansion,
    down_transform,
    flip,
    global_expansion,
    gsub,
    pg_augment,
    restrict_depth,
    rg_connect,
    unravel,
)

__all__ = [
    "BOOL",
    "NAT",
    "THEOREMS",
    "ClassKind",
    "ClassTag",
    "ConjunctiveQuery",
    "EnumerationBudgetError",
    "ProfileVerdict",
    "Semiring",
    "Signature",
    "Structure",
    "StructureError",
    "TheoremReport",
    "all_structures",
    "analyze_periodicity",
    "backward_expansion",
    "canonical_code",
    "canonical_instance",
    "classify",
    "compare_profiles",
    "count_hom_maps",
    "count_homs",
    "count_in",
    "down_transform",
    "enumerate_class",
    "enumerate_homs",
    "ext_membership",
    "flip",
    "from_json",
    "global_expansion",
    "gsub",
    "hom_count_matrix",
    "min_plus",
    "mod_p",
    "morphism_check",
    "negative_demo",
    "parse_semiring",
    "pg_augment",
    "random_structure",
    "restrict_depth",
    "rg_connect",
    "structure",
    "to_json",
    "unravel",
    "verify_theorem",
]
