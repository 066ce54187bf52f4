"""Modal, graded, backward, global and hybrid logics over pointed structures."""

from .checker import check, satisfying_states
from .equivalence import LANGUAGE_IDS, equivalent, refinement_colors
from .fo import count_satisfying_assignments, cq_to_fo, eval_fo, standard_translation
from .formulas import FormulaError, in_language, modal_depth
from .parser import ParseError, parse, to_text
from .simulation import mutual_simulation, simulation_fixpoint
from .synthesis import gsub_description_fo, pml_to_cq, tree_to_gml, tree_to_pml

__all__ = [
    "LANGUAGE_IDS",
    "FormulaError",
    "ParseError",
    "check",
    "count_satisfying_assignments",
    "cq_to_fo",
    "equivalent",
    "eval_fo",
    "gsub_description_fo",
    "in_language",
    "modal_depth",
    "mutual_simulation",
    "parse",
    "pml_to_cq",
    "refinement_colors",
    "satisfying_states",
    "simulation_fixpoint",
    "standard_translation",
    "to_text",
    "tree_to_gml",
    "tree_to_pml",
]
