"""Absorbing-set analysis and removal for non-binary LDPC Tanner graphs."""

from .config import (
    CodeGraph,
    Configuration,
    TopoClass,
    classify_unlabeled,
    cn_flippable_partners,
    compute_b_o_ut,
    compute_b_ut,
)
from .gf import FieldContext, FieldElement, gf4, gf8
from .gflinalg import (
    GfMatrix,
    NullSpaceBasis,
    has_full_support_vector,
    mat_vec,
    null_space,
    rank,
    rref,
)
from .removal import (
    OptimizationReport,
    RemovalPlan,
    Target,
    compute_b_for_values,
    compute_e_min,
    evaluate_weight_conditions,
    is_in_Z,
    optimize_code,
    oracle_in_family,
    oracle_is_gas,
    remove_object,
    select_candidate_edges,
)
from .wcmtree import (
    UnlabeledTree,
    WcmSet,
    b_max,
    build_tree,
    count_suboptimal,
    count_wcms_general,
    count_wcms_same_size,
    count_wcms_u_symmetric,
    extract_wcms,
    z_family,
)

__version__ = "0.1.0"

__all__ = [
    "CodeGraph",
    "Configuration",
    "FieldContext",
    "FieldElement",
    "GfMatrix",
    "NullSpaceBasis",
    "OptimizationReport",
    "RemovalPlan",
    "Target",
    "TopoClass",
    "UnlabeledTree",
    "WcmSet",
    "b_max",
    "build_tree",
    "classify_unlabeled",
    "cn_flippable_partners",
    "compute_b_for_values",
    "compute_b_o_ut",
    "compute_b_ut",
    "compute_e_min",
    "count_suboptimal",
    "count_wcms_general",
    "count_wcms_same_size",
    "count_wcms_u_symmetric",
    "evaluate_weight_conditions",
    "extract_wcms",
    "gf4",
    "gf8",
    "has_full_support_vector",
    "is_in_Z",
    "mat_vec",
    "null_space",
    "optimize_code",
    "oracle_in_family",
    "oracle_is_gas",
    "rank",
    "remove_object",
    "rref",
    "select_candidate_edges",
    "z_family",
]
