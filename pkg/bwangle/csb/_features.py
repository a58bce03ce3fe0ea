"""Exact candidate pairs read off polygonal unit spheres: vertex pairs, corner pairs and flat-segment pairs."""

import logging
from functools import lru_cache

import numpy as np

from ..corners import CornerWitness, corner_violation, fit_segments, flat_segment_witness
from ..corners.detect import corners_of
from ..space import SpaceDescriptor

log = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def sphere_features(space: SpaceDescriptor) -> tuple[np.ndarray, list[CornerWitness], list]:
    """Unit vertices, corners and flat segments of a polygonal 2-D sphere"""
    polyline = fit_segments(space)
    corners = corners_of(space, polyline)
    log.debug(f"{space.label}: {len(polyline.points)} vertices and {len(corners)} corners seed the CSB search")
    return polyline.points, corners, polyline.endpoints()


def sphere_pairs(space: SpaceDescriptor, rho: float) -> tuple[np.ndarray, np.ndarray]:
    """Unit vector pairs `(U, V)` to evaluate exactly at `rho`

    These are all pairs of sphere vertices, the pair of each corner at its worst `delta`, and the
    best pair of each flat segment. Both arrays are empty unless the sphere is a 2-D polygon.
    """
    if space.dimension != 2 or space.polygonal_vertices is None:
        return np.empty((0, space.dimension)), np.empty((0, space.dimension))

    points, corners, segments = sphere_features(space)
    i, j = np.meshgrid(np.arange(len(points)), np.arange(len(points)), indexing="ij")
    U, V = [points[i.ravel()]], [points[j.ravel()]]

    for corner in corners:
        u, v = corner.unit_pair(corner_violation(space, corner, rho).delta)
        U.append(u[None])
        V.append(v[None])

    for segment in segments:
        witness = flat_segment_witness(space, segment, rho)
        U.append(np.array([witness.x]))
        V.append(np.array([witness.y]))

    U, V = np.concatenate(U), np.concatenate(V)
    return U / space.weights(U)[:, None], V / space.weights(V)[:, None]
