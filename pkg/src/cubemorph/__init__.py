"""Explicit Lipschitz bijections between boolean functions on the Hamming
cube, with exhaustive and statistical verification at desk scale."""

from .cube_core import (
    BooleanFunction,
    Point,
    dist,
    flip,
    format_point,
    parse_point,
    random_balanced,
    weight,
)
from .btk_chains import (
    Chain,
    Signature,
    chain_element,
    chain_of,
    enumerate_partition,
    hausdorff_chain_distance,
    index_in_chain,
    mark,
    signature,
    signature_distance,
)
from .chain_mappings import dict_to_maj, maj_to_dict, maj_to_xor
from .gf2_maps import (
    SparseGF2Matrix,
    apply,
    build_tree_matrix,
    prefix_xor_inverse,
    prefix_xor_map,
    tree_inverse_apply,
    verify_conditions,
    xor_head_map,
)
from .stretch_metrics import (
    Mapping,
    StretchReport,
    directional_avg_stretch,
    exhaustive_min_avg_stretch,
    is_mapping_between,
    local_search_min_stretch,
    middle_binomial_check,
    stretch_report,
    typical_fraction,
)
from .random_matching import (
    MatchState,
    Status,
    build_dict_to_random,
    build_random_to_random,
    classify,
    recursion_curve,
    run_matching,
    unmatched_poor_fraction,
)

__version__ = "0.1.0"

__all__ = [
    "BooleanFunction", "Point", "dist", "flip", "format_point", "parse_point",
    "random_balanced", "weight",
    "Chain", "Signature", "chain_element", "chain_of", "enumerate_partition",
    "hausdorff_chain_distance", "index_in_chain", "mark", "signature",
    "signature_distance",
    "dict_to_maj", "maj_to_dict", "maj_to_xor",
    "SparseGF2Matrix", "apply", "build_tree_matrix", "prefix_xor_inverse",
    "prefix_xor_map", "tree_inverse_apply", "verify_conditions", "xor_head_map",
    "Mapping", "StretchReport", "directional_avg_stretch",
    "exhaustive_min_avg_stretch", "is_mapping_between", "local_search_min_stretch",
    "middle_binomial_check", "stretch_report", "typical_fraction",
    "MatchState", "Status", "build_dict_to_random", "build_random_to_random",
    "classify", "recursion_curve", "run_matching", "unmatched_poor_fraction",
]
