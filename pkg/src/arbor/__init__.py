"""Digraph branchings: rooted cut decompositions and k-distinct branching pairs.

The package decides, for a digraph D with terminals s and t, whether there
are an out-branching rooted at s and an in-branching rooted at t sharing at
most |A(T+)| - k arcs, and produces an independently checkable certificate
on YES.  Sub-modules:

* :mod:`arbor.digraph`       — immutable digraphs, parsing, reachability
* :mod:`arbor.flow`          — vertex-disjoint path and bi-reachability flow
* :mod:`arbor.branchings`    — out/in-trees, Edmonds branchings, extensions
* :mod:`arbor.exhaustive`    — branching enumeration for the exact oracle
* :mod:`arbor.decomposition` — rooted cut decompositions and their structure
* :mod:`arbor.solver`        — reduction rules, certifiers, the full search
* :mod:`arbor.generators`    — deterministic instance families
* :mod:`arbor.render`        — DOT / JSON emitters
* :mod:`arbor.cli`           — the ``arbor`` command
"""

from .branchings import (
    Branching,
    InTree,
    OutTree,
    arc_in_some_branching,
    arc_in_some_branching_witness,
    branching_violations,
    count_leaves,
    distinctness,
    extend_in_tree,
    extend_out_tree,
    in_tree_violations,
    max_leaf_out_branching,
    max_weight_in_branching,
    max_weight_out_branching,
    min_overlap_in_branching,
    out_tree_violations,
)
from .decomposition import (
    CutDecomposition,
    DegeneratePath,
    avoid_half_path,
    bottleneck_partition,
    build_cut_decomposition,
    check_bottleneck_order,
    degenerate_paths,
    fins,
    forbidden_back_arcs,
    longest_monotone_path,
)
from .decomposition import validate as validate_decomposition
from .digraph import (
    ContractViolation,
    Digraph,
    ParseError,
    format_edge_list,
    has_rooted_in_branching,
    has_rooted_out_branching,
    parse_edge_list,
    reachable_set,
    scc_condensation,
)
from .exhaustive import enumerate_in_branchings, enumerate_out_branchings
from .flow import DisjointPathPair, bi_reachable_set, diblock, two_disjoint_paths
from .solver import (
    REJECT,
    Certificate,
    Instance,
    OracleCapExceeded,
    PathArcClassification,
    SolveResult,
    apply_rule1,
    apply_rule2,
    build_A_plus_in_tree,
    build_A_zero_in_tree,
    build_nondegen_out_tree,
    classify_path_arcs,
    compute_Rs_Rt,
    oracle_cap,
    oracle_solve,
    reduce_instance,
    reroot_out_tree,
    rule2_segments,
    solve,
    solve_single_root,
    solve_unrooted,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "Branching",
    "Certificate",
    "ContractViolation",
    "CutDecomposition",
    "DegeneratePath",
    "Digraph",
    "DisjointPathPair",
    "InTree",
    "Instance",
    "OracleCapExceeded",
    "OutTree",
    "ParseError",
    "PathArcClassification",
    "REJECT",
    "SolveResult",
    "apply_rule1",
    "apply_rule2",
    "arc_in_some_branching",
    "arc_in_some_branching_witness",
    "avoid_half_path",
    "bi_reachable_set",
    "bottleneck_partition",
    "branching_violations",
    "build_A_plus_in_tree",
    "build_A_zero_in_tree",
    "build_cut_decomposition",
    "build_nondegen_out_tree",
    "check_bottleneck_order",
    "classify_path_arcs",
    "compute_Rs_Rt",
    "count_leaves",
    "degenerate_paths",
    "diblock",
    "distinctness",
    "enumerate_in_branchings",
    "enumerate_out_branchings",
    "extend_in_tree",
    "extend_out_tree",
    "fins",
    "forbidden_back_arcs",
    "format_edge_list",
    "has_rooted_in_branching",
    "has_rooted_out_branching",
    "in_tree_violations",
    "longest_monotone_path",
    "max_leaf_out_branching",
    "max_weight_in_branching",
    "max_weight_out_branching",
    "min_overlap_in_branching",
    "oracle_cap",
    "oracle_solve",
    "out_tree_violations",
    "parse_edge_list",
    "reachable_set",
    "reduce_instance",
    "reroot_out_tree",
    "rule2_segments",
    "scc_condensation",
    "solve",
    "solve_single_root",
    "solve_unrooted",
    "two_disjoint_paths",
    "validate_decomposition",
    "verify_certificate",
]
