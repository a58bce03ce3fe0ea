import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .._constants import ZERO_WEIGHT_FRACTION
from .._errors import InvalidSpace, NotPositiveDefinite, ZeroWeight
from .._settings import settings
from .descriptor import SpaceDescriptor

log = logging.getLogger(__name__)

AXIS_SNAP = 1e-12  # cos(pi / 2) evaluates to 6e-17, not 0


@dataclass(frozen=True)
class SphereSample:
    """Unit vectors sampled on the sphere of a space

    Attributes:
        points: Array of shape `(m, n)` of unit vectors
        thetas: Direction angles of the points (2-D grid only, else `None`)
        skipped: Direction angles (or indices for random sampling) dropped because of a zero weight
    """

    points: np.ndarray
    thetas: np.ndarray | None
    skipped: np.ndarray

    def __len__(self) -> int:
        return len(self.points)

    @property
    def flagged(self) -> bool:
        return len(self.skipped) > 0


def as_vector(space: SpaceDescriptor, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != space.dimension:
        raise InvalidSpace(f"Expected a vector of length {space.dimension}, found shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidSpace(f"Vector entries must be finite, found {x.tolist()}")
    return x


def eval_weight(space: SpaceDescriptor, x) -> float:
    """Weight `||x||` of one vector

    Args:
        space: A space descriptor
        x: A vector of length `space.dimension`

    Returns:
        The non-negative weight of `x`
    """
    return float(space.weights(as_vector(space, x)))


def normalize(space: SpaceDescriptor, x) -> np.ndarray:
    """Return `x / ||x||`, raising `ZeroWeight` when `||x|| = 0`"""
    x = as_vector(space, x)
    weight = float(space.weights(x))
    if not weight > 0:
        raise ZeroWeight(f"The vector {x.tolist()} has zero weight in {space.label}")
    return x / weight


def directions(thetas: np.ndarray) -> np.ndarray:
    """Unit Euclidean directions of angles, exact on the axes"""
    D = np.stack([np.cos(thetas), np.sin(thetas)], axis=-1)
    return np.where(np.abs(D) < AXIS_SNAP, 0.0, D)


def unit_points(space: SpaceDescriptor, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors of a 2-D space in the directions `thetas`, and the mask of non-zero-weight directions"""
    D = directions(np.asarray(thetas, dtype=float))
    weights = space.weights(D)
    valid = weights > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        points = D / np.where(valid, weights, 1.0)[..., None]
    return points, valid


def angular_grid(resolution: int) -> np.ndarray:
    return 2 * np.pi * np.arange(resolution) / resolution


def sample_unit_sphere(space: SpaceDescriptor, resolution: int, seed: int | None = None) -> SphereSample:
    """Sample unit vectors: a theta-uniform grid in dimension 2, seeded Gaussian directions otherwise

    Args:
        space: A space descriptor
        resolution: Number of sampled directions
        seed: Seed of the random sampling (only used when `space.dimension != 2`)

    Returns:
        A `SphereSample`. Directions of zero weight are skipped and flagged in `SphereSample.skipped`.
    """
    assert resolution >= 1, "The resolution must be a positive integer"

    if space.dimension == 2:
        thetas = angular_grid(resolution)
        points, valid = unit_points(space, thetas)
        skipped = thetas[~valid]
        points, thetas = points[valid], thetas[valid]
    else:
        rng = np.random.default_rng(settings.seed if seed is None else seed)
        D = rng.normal(size=(resolution, space.dimension))
        weights = space.weights(D)
        valid = weights > 0
        skipped = np.flatnonzero(~valid)
        points, thetas = D[valid] / weights[valid, None], None

    if len(skipped) > ZERO_WEIGHT_FRACTION * resolution:
        raise NotPositiveDefinite(
            f"{len(skipped)} of {resolution} sampled directions have zero weight in {space.label}"
        )
    if len(skipped):
        log.warning(f"Skipping {len(skipped)} zero-weight direction(s) of {space.label}")

    return SphereSample(points=points, thetas=thetas, skipped=skipped)


def radius(space: SpaceDescriptor, theta) -> np.ndarray | float:
    """Sphere radius `R(theta) = 1 / ||(cos theta, sin theta)||` of a 2-D space (`inf` on zero-weight directions)"""
    assert space.dimension == 2, "The radial function is only defined for 2-dimensional spaces"
    weights = space.weights(directions(np.asarray(theta, dtype=float)))
    with np.errstate(divide="ignore"):
        radii = np.where(weights > 0, 1 / np.where(weights > 0, weights, 1.0), np.inf)
    return float(radii) if np.ndim(radii) == 0 else radii


def sphere_polyline(space: SpaceDescriptor, resolution: int) -> pd.DataFrame:
    """Theta-ordered `(theta, x, y)` points of the unit sphere of a 2-D space, e.g. for plotting"""
    assert space.dimension == 2, "Sphere polylines are only available for 2-dimensional spaces"
    thetas = angular_grid(resolution)
    points, valid = unit_points(space, thetas)
    return pd.DataFrame({"theta": thetas[valid], "x": points[valid, 0], "y": points[valid, 1]})
