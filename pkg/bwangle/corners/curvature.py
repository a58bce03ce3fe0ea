import logging
from dataclasses import dataclass, field

import numpy as np

from ..geometry import rho_product
from ..space import SpaceDescriptor, structure_report
from ._sphere import fit_segments
from .detect import CornerWitness, corners_of
from .formulas import flat_segment_value, optimal_flat_parameter

log = logging.getLogger(__name__)


@dataclass
class CurvatureReport:
    """Curvature properties of a 2-D unit sphere

    Attributes:
        strictly_convex: No chord of the sphere touches it outside its endpoints (no flat segment and a convex ball)
        strictly_curved: The sphere contains no straight segment
        flat_segments: Endpoints of the maximal straight segments of the sphere
        corners: The convex and concave corners
        resolution: Number of sampled directions, or `None` for exact polygonal spheres
    """

    strictly_convex: bool
    strictly_curved: bool
    flat_segments: list[tuple[list[float], list[float]]]
    corners: list[CornerWitness] = field(default_factory=list)
    resolution: int | None = None

    def to_dict(self) -> dict:
        return {
            "strictly_convex": self.strictly_convex,
            "strictly_curved": self.strictly_curved,
            "flat_segments": [list(segment) for segment in self.flat_segments],
            "corners": [corner.to_dict() for corner in self.corners],
            "resolution": self.resolution,
        }


@dataclass
class FlatSegmentWitness:
    """Pair `x = z + t w`, `y = z - t w` of unit vectors on a flat segment, with `z` its midpoint"""

    x: list[float]
    y: list[float]
    t: float
    value: float
    formula: float

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "t": self.t, "value": self.value, "formula": self.formula}


def curvature_report(space: SpaceDescriptor, resolution: int | None = None) -> CurvatureReport:
    """Detect flat segments and corners, and decide strict curvature and strict convexity

    Args:
        space: A positive definite 2-D space
        resolution: Number of sampled directions for non-polygonal spheres

    Returns:
        A `CurvatureReport`
    """
    polyline = fit_segments(space, resolution)
    flat_segments = polyline.endpoints()
    strictly_curved = len(flat_segments) == 0
    strictly_convex = strictly_curved and structure_report(space).triangle_inequality_holds

    report = CurvatureReport(
        strictly_convex=strictly_convex,
        strictly_curved=strictly_curved,
        flat_segments=flat_segments,
        corners=corners_of(space, polyline),
        resolution=None if polyline.exact else len(polyline.points),
    )
    log.info(
        f"{space.label}: {len(flat_segments)} flat segments, {len(report.corners)} corners, "
        f"strictly curved={strictly_curved}, strictly convex={strictly_convex}"
    )
    return report


def flat_segment_witness(space: SpaceDescriptor, segment, rho: float) -> FlatSegmentWitness:
    """Best pair `z +- t w` of a flat segment for the CSB ratio at `rho`

    With `z` the midpoint of the segment and `w` its unit direction, the normalized rho-product of
    the pair is `(1 - t**2) (1 + t**2) ** rho`, largest at `t = sqrt((rho - 1) / (rho + 1))`.

    Args:
        space: A 2-D space
        segment: The two endpoints `(P, Q)` of a straight piece of the unit sphere
        rho: The exponent

    Returns:
        A `FlatSegmentWitness` whose `value` is computed from the weights and `formula` from the closed form
    """
    P, Q = (np.asarray(point, dtype=float) for point in segment)
    length = float(space.weights(Q - P))
    if not length > 0:
        raise ValueError("A flat segment needs two distinct endpoints")

    z, w = (P + Q) / 2, (Q - P) / length
    t = min(optimal_flat_parameter(rho), length / 2)
    x, y = z + t * w, z - t * w

    return FlatSegmentWitness(
        x=x.tolist(),
        y=y.tolist(),
        t=t,
        value=rho_product(space, x, y, rho),
        formula=flat_segment_value(t, rho),
    )
