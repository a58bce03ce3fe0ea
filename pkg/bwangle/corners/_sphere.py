"""Straight pieces of 2-D unit spheres: exact for polygonal weights, fitted on samples otherwise."""

import logging
from dataclasses import dataclass

import numpy as np

from .._errors import InvalidSpace, NotPositiveDefinite
from .._settings import settings
from ..space import SpaceDescriptor, sample_unit_sphere

log = logging.getLogger(__name__)

MIN_INTERIOR_POINTS = 2


@dataclass
class SpherePolyline:
    """Counter-clockwise closed polyline of the unit sphere and its maximal straight segments

    Attributes:
        points: Array of shape `(k, 2)` of unit vectors, counter-clockwise
        segments: Pairs `(i, j)` of point indices, the segment going from `points[i]` to `points[j]` counter-clockwise
        exact: Whether the polyline is the exact polygonal sphere
    """

    points: np.ndarray
    segments: list[tuple[int, int]]
    exact: bool

    def endpoints(self) -> list[tuple[list[float], list[float]]]:
        return [(self.points[i].tolist(), self.points[j].tolist()) for i, j in self.segments]


def turn_sines(points: np.ndarray) -> np.ndarray:
    """Sine of the turning angle of the closed polyline at each point"""
    before = points - np.roll(points, 1, axis=0)
    after = np.roll(points, -1, axis=0) - points
    cross = before[:, 0] * after[:, 1] - before[:, 1] * after[:, 0]
    return cross / (np.linalg.norm(before, axis=1) * np.linalg.norm(after, axis=1))


def _check_space(space: SpaceDescriptor):
    if space.dimension != 2:
        raise InvalidSpace(f"Corner and curvature detection needs a 2-dimensional space, found {space.dimension}")
    if not space.positive_definite:
        raise NotPositiveDefinite(f"Corner detection requires a positive definite space, {space.label} is not")


def fit_segments(space: SpaceDescriptor, resolution: int | None = None, tol: float | None = None) -> SpherePolyline:
    """Build the sphere polyline and fit its maximal straight segments

    Args:
        space: A positive definite 2-D space
        resolution: Number of sampled directions (ignored for polygonal spheres)
        tol: Collinearity tolerance on the sine of the turning angle

    Returns:
        A `SpherePolyline`
    """
    _check_space(space)
    resolution = settings.sphere_resolution if resolution is None else resolution
    tol = settings.collinearity_tol if tol is None else tol

    vertices = space.polygonal_vertices
    if vertices is not None:
        vertices = vertices / space.weights(vertices)[:, None]
        vertices = vertices[np.abs(turn_sines(vertices)) > tol]
        k = len(vertices)
        return SpherePolyline(points=vertices, segments=[(i, (i + 1) % k) for i in range(k)], exact=True)

    points = sample_unit_sphere(space, resolution).points
    collinear = np.abs(turn_sines(points)) <= tol
    return SpherePolyline(points=points, segments=_collinear_runs(collinear), exact=False)


def _collinear_runs(collinear: np.ndarray) -> list[tuple[int, int]]:
    """Segments `(i - 1, j + 1)` spanned by circular runs `i..j` of collinear interior points"""
    k = len(collinear)
    if collinear.all():
        log.warning("Every sampled sphere point is collinear with its neighbours")
        return []
    if not collinear.any():
        return []

    shift = int(np.argmin(collinear))  # start the scan on a non-collinear point
    segments, run_start = [], None
    for offset in range(1, k + 1):
        index = (shift + offset) % k
        if collinear[index] and run_start is None:
            run_start = offset
        elif not collinear[index] and run_start is not None:
            if offset - run_start >= MIN_INTERIOR_POINTS:
                segments.append(((shift + run_start - 1) % k, index))
            run_start = None
    return segments
