from .algebra import (CurvedAlgebra, Element, RelationReport, check_curved_ainfty, check_mc,
                      default_arity_bound, deform, gr0, gr0_cohomology, gr0_complex, mc_expression,
                      verify_cunit)
from .bimodule import Bimodule, assemble_triangle, bimodule_action, check_bimodule
from .category import CurvedCategory, bc_structure_maps, deform_category, upper_triangular_category
from .functor import CurvedFunctor, check_functor, pushforward_mc, transport_structure

__all__ = [
    "Bimodule", "CurvedAlgebra", "CurvedCategory", "CurvedFunctor", "Element", "RelationReport",
    "assemble_triangle", "bc_structure_maps", "bimodule_action", "check_bimodule",
    "check_curved_ainfty", "check_functor", "check_mc", "default_arity_bound", "deform",
    "deform_category", "gr0", "gr0_cohomology", "gr0_complex", "mc_expression",
    "pushforward_mc", "transport_structure", "upper_triangular_category", "verify_cunit",
]
