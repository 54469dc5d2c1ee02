from .discs import (Bubble, BubbleConfig, ExclusionReport, TangencyData, bubble_config_bound,
                    bubble_config_dim, canonical_tangency, disc_dim, forgetful_dim_diff,
                    sphere_exclusion)
from .dm import DiscNode, DMStratumTree, SphereNode, enumerate_dm_strata, top_dimension
from .geometry import (GeometrySpec, SphereClass, c1_subvariety, geometry_from_mapping,
                       geometry_to_mapping, monomial_weight, sym_q_order, total_intersections)
from .trees import (CombinatorialType, bound_slack, dim_gamma, dim_gamma_terms, dim_upper_bound,
                    enumerate_types, tree_automorphisms, unlabeled_trees)

__all__ = [
    "Bubble", "BubbleConfig", "CombinatorialType", "DMStratumTree", "DiscNode", "ExclusionReport",
    "GeometrySpec", "SphereClass", "SphereNode", "TangencyData", "bound_slack",
    "bubble_config_bound", "bubble_config_dim", "c1_subvariety", "canonical_tangency",
    "dim_gamma", "dim_gamma_terms", "dim_upper_bound", "disc_dim", "enumerate_dm_strata",
    "enumerate_types", "forgetful_dim_diff", "geometry_from_mapping", "geometry_to_mapping",
    "monomial_weight", "sphere_exclusion", "sym_q_order", "top_dimension", "total_intersections",
    "tree_automorphisms", "unlabeled_trees",
]
