from ._sphere import SpherePolyline, fit_segments
from .curvature import CurvatureReport, FlatSegmentWitness, curvature_report, flat_segment_witness
from .detect import (
    CornerViolation,
    CornerWitness,
    analytic_corner_product,
    corner_pair_product,
    corner_violation,
    find_corners,
    verify_corner,
)
from .formulas import (
    EMapScan,
    e_map,
    e_map_scan,
    flat_segment_threshold,
    flat_segment_value,
    optimal_flat_parameter,
)
