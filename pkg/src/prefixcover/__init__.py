"""Prefix covering designs and the hardness reductions built from them."""

from .core import (
    Position,
    PrefixCoveringDesign,
    TripletCover,
    VerificationReport,
    check_singleton,
    compute_alpha,
    dedupe,
    min_triplet_cover,
    normalize_equal_length,
    primary_position,
    quality,
    scale,
    verify,
)
from .covering import (
    CoveringDesign,
    MultiMatching,
    find_multimatching,
    pad_multimatch,
    prepare,
    projective_plane,
    scale_cd,
    verify_cd,
)
from .transform import TransformParams, cd_to_pcd, classic_cyclic, classic_star, general_pcd, transform
from .bounds import BoundReport, bound_report, upper_bound
from .sat import SearchShape, CnfInstance, encode, decode, check_assignment
from .reductions import (
    BoxInstance,
    Hypergraph3,
    PointInstance,
    build_coverage_instance,
    build_perimeter_instance,
    build_volume_instance,
    coverage_to_depth,
    ind,
)
from .oracles import (
    CompressedGrid,
    solve_coverage,
    solve_depth,
    solve_empty_anchored,
    solve_hyperclique,
    solve_measure,
)

__version__ = "0.1.0"
