"""Lossy kernels for connected dominating set and connected distance-r domination."""

from .biclique_free import compute_core, core_bound, psaks_kdd, reduce_core_once
from .errors import InputError, ResourceError, VerificationError
from .framework import (
    AnnotatedInstance,
    KernelOutput,
    LiftReport,
    connect_dominator,
    covering_family,
    ds_bikernel,
    lift_solution,
    lossy_cds_kernel,
    objective_value,
)
from .graph import Graph
from .oracles import (
    SetCoverInstance,
    certified_core,
    exact_group_steiner_tree,
    exact_min_dominator,
    exact_set_cover,
    exact_steiner_tree,
    is_domination_core,
)
from .reductions import membership_check_Hp, reduce_to_rds
from .rkernel import (
    RKernelParams,
    build_dot_graph,
    build_reduced_graph,
    connected_core,
    one_approx_ds_bikernel,
    r_lift,
    r_lossy_kernel,
)

__all__ = [
    "AnnotatedInstance", "Graph", "InputError", "KernelOutput", "LiftReport", "RKernelParams",
    "ResourceError", "SetCoverInstance", "VerificationError", "build_dot_graph", "build_reduced_graph",
    "certified_core", "compute_core", "connect_dominator", "connected_core", "core_bound",
    "covering_family", "ds_bikernel", "exact_group_steiner_tree", "exact_min_dominator",
    "exact_set_cover", "exact_steiner_tree", "is_domination_core", "lift_solution", "lossy_cds_kernel",
    "membership_check_Hp", "objective_value", "one_approx_ds_bikernel", "psaks_kdd", "r_lift",
    "r_lossy_kernel", "reduce_core_once", "reduce_to_rds",
]
