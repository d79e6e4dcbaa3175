"""Dunkl–Williams constant and Birkhoff orthogonality in two-dimensional normed spaces."""

from .birkhoff import (
    LineMinResult,
    OrthoPair,
    baronti_check,
    is_birkhoff,
    min_along_line,
    orthogonal_companions,
    vertex_birkhoff,
    wedge,
)
from .dwengine import (
    DWResult,
    EngineConfig,
    Formulation,
    Witness,
    check_equivalences,
    compute_dw,
    compute_dw_formulation,
    compute_dwb,
    compute_ib,
    dual_experiment,
    dw3_point,
    dw_point,
    evaluate_witness,
    segment_certificate,
    segment_min_polygon,
)
from .errors import (
    ArgumentError,
    DWPlaneError,
    ExcludedPairError,
    GeometryError,
    InternalError,
    SpecError,
)
from .normspace import (
    DualOf,
    Lp,
    Mixed,
    NormHandle,
    Polygon,
    RegularPolygon,
    Vector2,
    build_norm,
    dual_eval,
    format_norm,
    parse_norm,
    polar_polygon,
    sphere_polyline,
    unit_vector,
    validate_norm,
)
from .oracle import OracleConfig, oracle_dw, oracle_dwb, oracle_gamma_min, oracle_line_min

__version__ = "0.1.0"

__all__ = [
    "LineMinResult",
    "OrthoPair",
    "baronti_check",
    "is_birkhoff",
    "min_along_line",
    "orthogonal_companions",
    "vertex_birkhoff",
    "wedge",
    "DWResult",
    "EngineConfig",
    "Formulation",
    "Witness",
    "check_equivalences",
    "compute_dw",
    "compute_dw_formulation",
    "compute_dwb",
    "compute_ib",
    "dual_experiment",
    "dw3_point",
    "dw_point",
    "evaluate_witness",
    "segment_certificate",
    "segment_min_polygon",
    "ArgumentError",
    "DWPlaneError",
    "ExcludedPairError",
    "GeometryError",
    "InternalError",
    "SpecError",
    "DualOf",
    "Lp",
    "Mixed",
    "NormHandle",
    "Polygon",
    "RegularPolygon",
    "Vector2",
    "build_norm",
    "dual_eval",
    "format_norm",
    "parse_norm",
    "polar_polygon",
    "sphere_polyline",
    "unit_vector",
    "validate_norm",
    "OracleConfig",
    "oracle_dw",
    "oracle_dwb",
    "oracle_gamma_min",
    "oracle_line_min",
]
