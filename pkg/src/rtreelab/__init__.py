"""Computational real-tree geometry and free-group boundary dynamics.

Finite metric trees with exact rational arithmetic, four-point
0-hyperbolicity certification and tree realization; directions and the
observers' topology with depth-certified convergence decisions over lazy
tree oracles; free-group boundary points, the boundary-to-tree limit map
and finite dual-lamination samples; and convex blending of compatible
tree metrics with full re-certification.
"""

from .tree import Location, MetricTree, SegmentPiece, path_tree, star_tree
from .hyperbolicity import (
    FourPointWitness,
    HyperbolicityVerdict,
    MetricTable,
    NotZeroHyperbolicError,
    check_hyperbolic,
    first_violation,
    gromov_product,
    max_four_point_defect,
    reconstruct_tree,
    verify_witness,
)
from .oracles import (
    LINE_MINUS,
    LINE_PLUS,
    FiniteTreeOracle,
    LineOracle,
    MultipodOracle,
    Ray,
    TreeOracle,
)
from .observers import (
    ConvergenceVerdict,
    Direction,
    ExtractionResult,
    LiminfResult,
    PointSequence,
    ShapeMapVerdict,
    converges_obs,
    direction_of,
    extract_convergent_subsequence,
    in_direction,
    is_convex_point_set,
    liminf_from,
    same_direction,
    subbasis_from_sample,
    verify_shape_map,
)
from .boundary import (
    BoundaryPair,
    BoundaryPoint,
    LaminationSample,
    act,
    act_pair,
    common_prefix,
    flip,
    parse_boundary_point,
    saturate,
)
from .qmap import (
    ConjugacyClassRecord,
    DenseLineAction,
    FiberCheck,
    IsometricAction,
    QEstimate,
    TranslationLength,
    dual_lamination_sample,
    equivariance_check,
    line_action_from_weights,
    min_positive_translation,
    q_continuity_probe,
    q_fiber_check,
    qmap_estimate,
    small_words_search,
    translation_length,
)
from .blend import (
    AxiomVerdict,
    AxiomWitness,
    CertifyResult,
    CompatibleMetricPair,
    LengthFunction,
    blend_length_functions,
    blend_metric,
    certify_rtree,
    convex_combination_length_check,
    length_axiom_check,
    length_function_from_line_action,
    length_function_from_marked_graph,
    length_function_from_table,
    marked_graph_length,
    nielsen_generates,
    rose_blend_axiom_scan,
)
from .words import Basis, cyclic_reduce, invert_word, reduce_word

__version__ = "0.1.0"

__all__ = [
    "AxiomVerdict",
    "AxiomWitness",
    "Basis",
    "BoundaryPair",
    "BoundaryPoint",
    "CertifyResult",
    "CompatibleMetricPair",
    "ConjugacyClassRecord",
    "ConvergenceVerdict",
    "DenseLineAction",
    "Direction",
    "ExtractionResult",
    "FiberCheck",
    "FiniteTreeOracle",
    "FourPointWitness",
    "HyperbolicityVerdict",
    "IsometricAction",
    "LINE_MINUS",
    "LINE_PLUS",
    "LaminationSample",
    "LengthFunction",
    "LiminfResult",
    "LineOracle",
    "Location",
    "MetricTable",
    "MetricTree",
    "MultipodOracle",
    "NotZeroHyperbolicError",
    "PointSequence",
    "QEstimate",
    "Ray",
    "SegmentPiece",
    "ShapeMapVerdict",
    "TranslationLength",
    "TreeOracle",
    "act",
    "act_pair",
    "blend_length_functions",
    "blend_metric",
    "certify_rtree",
    "check_hyperbolic",
    "common_prefix",
    "converges_obs",
    "convex_combination_length_check",
    "cyclic_reduce",
    "direction_of",
    "dual_lamination_sample",
    "equivariance_check",
    "extract_convergent_subsequence",
    "first_violation",
    "flip",
    "gromov_product",
    "in_direction",
    "invert_word",
    "is_convex_point_set",
    "length_axiom_check",
    "length_function_from_line_action",
    "length_function_from_marked_graph",
    "length_function_from_table",
    "liminf_from",
    "line_action_from_weights",
    "marked_graph_length",
    "max_four_point_defect",
    "min_positive_translation",
    "nielsen_generates",
    "parse_boundary_point",
    "path_tree",
    "q_continuity_probe",
    "q_fiber_check",
    "qmap_estimate",
    "reconstruct_tree",
    "reduce_word",
    "rose_blend_axiom_scan",
    "same_direction",
    "saturate",
    "small_words_search",
    "star_tree",
    "subbasis_from_sample",
    "translation_length",
    "verify_shape_map",
    "verify_witness",
]
