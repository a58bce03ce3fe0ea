"""The rho-product and the rho-angle of pairs of vectors.

For non-zero `x, y` with unit vectors `u = x / ||x||`, `v = y / ||y||`, let `s = ||u + v||` and
`d = ||u - v||`. The rho-product is `||x|| ||y|| (Delta / 4) (Sigma / 4) ** rho` with
`Sigma = s**2 + d**2` and `Delta = s**2 - d**2`, and the rho-angle is the arccos of its
normalized value when that value lies in `[-1, 1]`.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .._constants import COSINE_CLAMP
from .._errors import NumericalFailure, ZeroWeight
from ..space import SpaceDescriptor
from ..space.weights import as_vector

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairGeometry:
    s: float
    d: float
    Sigma: float
    Delta: float

    def to_dict(self) -> dict:
        return {"s": self.s, "d": self.d, "Sigma": self.Sigma, "Delta": self.Delta}


@dataclass(frozen=True)
class AngleOutcome:
    cosine: float
    defined: bool
    angle_rad: float

    @property
    def angle_deg(self) -> float:
        return math.degrees(self.angle_rad)

    def to_dict(self, degrees: bool = False) -> dict:
        data = {"cosine": self.cosine, "defined": self.defined}
        if self.defined:
            data["angle_deg" if degrees else "angle_rad"] = self.angle_deg if degrees else self.angle_rad
        return data


def unit_sd(space: SpaceDescriptor, U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """`s` and `d` for arrays of unit vectors"""
    return space.weights(U + V), space.weights(U - V)


def normalize_rows(space: SpaceDescriptor, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors and weights of an array of vectors, raising `ZeroWeight` if one weight vanishes"""
    X = np.asarray(X, dtype=float)
    weights = space.weights(X)
    if np.any(~(weights > 0)):
        index = np.unravel_index(np.argmin(weights), weights.shape)
        raise ZeroWeight(f"The vector {X[index].tolist()} has zero weight in {space.label}")
    return X / weights[..., None], weights


def quarter_terms(s: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """`Delta / 4` and `Sigma / 4`"""
    s2, d2 = s * s, d * d
    return (s2 - d2) / 4, (s2 + d2) / 4


def cosine_from_terms(delta4: np.ndarray, sigma4: np.ndarray, rho: float) -> np.ndarray:
    """`(Delta / 4) (Sigma / 4) ** rho`, computed as `exp(rho log(Sigma / 4))`"""
    if np.any(~(sigma4 > 0)):
        raise NumericalFailure("Sigma vanished for a pair of non-zero vectors; the weight is degenerate")
    with np.errstate(over="ignore"):
        return delta4 * np.exp(rho * np.log(sigma4))


def angles_from_cosines(cosines: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Angles (NaN where undefined) and the mask of defined angles"""
    defined = np.abs(cosines) <= 1 + COSINE_CLAMP
    with np.errstate(invalid="ignore"):
        angles = np.where(defined, np.arccos(np.clip(cosines, -1.0, 1.0)), np.nan)
    return angles, defined


def rho_cosines(space: SpaceDescriptor, X: np.ndarray, Y: np.ndarray, rho: float) -> np.ndarray:
    """Vectorized normalized rho-products of the pairs `(X[i], Y[i])`"""
    U, _ = normalize_rows(space, X)
    V, _ = normalize_rows(space, Y)
    return cosine_from_terms(*quarter_terms(*unit_sd(space, U, V)), rho)


def rho_angles(space: SpaceDescriptor, X: np.ndarray, Y: np.ndarray, rho: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized rho-angles (NaN where undefined) and cosines"""
    cosines = rho_cosines(space, X, Y, rho)
    return angles_from_cosines(cosines)[0], cosines


def pair_geometry(space: SpaceDescriptor, x, y) -> PairGeometry:
    """Weights `s`, `d` of the sum and difference of the normalized vectors, and `Sigma`, `Delta`"""
    U, _ = normalize_rows(space, np.stack([as_vector(space, x), as_vector(space, y)]))
    s, d = (float(value) for value in unit_sd(space, U[0], U[1]))
    return PairGeometry(s=s, d=d, Sigma=s * s + d * d, Delta=s * s - d * d)


def _outcome(cosine: float) -> AngleOutcome:
    angle, defined = angles_from_cosines(np.asarray(cosine))
    return AngleOutcome(cosine=float(cosine), defined=bool(defined), angle_rad=float(angle))


def rho_product(space: SpaceDescriptor, x, y, rho: float) -> float:
    """The rho-product `<x|y>_rho`, which is 0 as soon as one of the vectors has zero weight"""
    x, y = as_vector(space, x), as_vector(space, y)
    wx, wy = float(space.weights(x)), float(space.weights(y))
    if wx == 0 or wy == 0:
        return 0.0

    s, d = unit_sd(space, x / wx, y / wy)
    return wx * wy * float(cosine_from_terms(*quarter_terms(s, d), rho))


def rho_angle(space: SpaceDescriptor, x, y, rho: float) -> AngleOutcome:
    """The rho-angle between two non-zero vectors

    Args:
        space: A space descriptor
        x: First vector
        y: Second vector
        rho: The real exponent

    Returns:
        An `AngleOutcome`. When the normalized product lies outside `[-1, 1]` (beyond a `1e-12` rounding
            margin), the angle is undefined and `angle_rad` is NaN, but the offending cosine is still reported.
    """
    geometry = pair_geometry(space, x, y)
    return _outcome(float(cosine_from_terms(geometry.Delta / 4, geometry.Sigma / 4, rho)))


def special_angle(space: SpaceDescriptor, x, y, which: int) -> AngleOutcome:
    """Closed forms of the rho-angle for rho = 1, 0 and -1"""
    assert which in (1, 0, -1), "The closed forms only exist for rho in {1, 0, -1}"
    g = pair_geometry(space, x, y)

    if which == 1:
        cosine = (g.s**4 - g.d**4) / 16
    elif which == 0:
        cosine = g.Delta / 4
    else:
        if not g.Sigma > 0:
            raise NumericalFailure("Sigma vanished for a pair of non-zero vectors")
        cosine = g.Delta / g.Sigma
    return _outcome(cosine)


def euclid_angle(x, y) -> float:
    """Usual Euclidean angle between two non-zero vectors"""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ZeroWeight("The Euclidean angle is not defined for a zero vector")
    return float(np.arccos(np.clip(np.dot(x, y) / (nx * ny), -1.0, 1.0)))
