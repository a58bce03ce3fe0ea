"""Weight families: vectorized evaluation of balanced weights on arrays of vectors.

Every family evaluates `X` of shape `(..., dimension)` into weights of shape `(...)`.
Two-dimensional families that are not coordinatewise (polygons, radial tables) are
evaluated radially, i.e. `|x|_2 / R(theta(x))`, after mapping `x` to the closed upper
half-plane so that `weight(-x) == weight(x)` holds bit for bit.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from shapely.geometry import Point, Polygon
from shapely.validation import explain_validity

from .._constants import FamilyKeys
from .._errors import InvalidSpace

log = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
OVERRIDE_ANGLE_TOL = 1e-12


def format_extended(value: float) -> float | str:
    """Serialize an extended real (infinities as the strings `"inf"` / `"-inf"`)"""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(value)


def parse_extended(value: float | int | str) -> float:
    if isinstance(value, str):
        value = value.strip().lower()
        if value in ("inf", "+inf", "infinity", "∞"):
            return math.inf
        if value in ("-inf", "-infinity", "-∞"):
            return -math.inf
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidSpace(f"Cannot parse {value!r} as an extended real number")
    if math.isnan(value):
        raise InvalidSpace("An extended real number cannot be NaN")
    return value


def hoelder_combine(A: np.ndarray, p: float) -> np.ndarray:
    """Combine non-negative entries along the last axis with the Hölder rule of exponent `p`

    Args:
        A: Non-negative array of shape `(..., k)`
        p: Extended real exponent. `p > 0` is the usual p-mean, `p < 0` vanishes as soon as one entry
            vanishes, `p = 0` is constantly zero, `±inf` are max / min.

    Returns:
        Array of shape `(...)`
    """
    if p == math.inf:
        return A.max(axis=-1)
    if p == -math.inf:
        return A.min(axis=-1)
    if p == 0:
        return np.zeros(A.shape[:-1])

    if p > 0:
        scale = A.max(axis=-1)
    else:
        scale = A.min(axis=-1)

    safe_scale = np.where(scale > 0, scale, 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratios = A / safe_scale[..., None]
        if p < 0:
            ratios = np.where(A > 0, ratios, 1.0)
        combined = safe_scale * np.sum(ratios**p, axis=-1) ** (1 / p)

    return np.where(scale > 0, combined, 0.0)


def upper_half(X: np.ndarray) -> np.ndarray:
    """Map 2-D vectors to the closed upper half-plane (`y > 0`, or `y == 0` and `x >= 0`)"""
    flip = (X[..., 1] < 0) | ((X[..., 1] == 0) & (X[..., 0] < 0))
    return np.where(flip[..., None], -X, X) + 0.0


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


class WeightFamily:
    """Common interface of the weight families"""

    family: ClassVar[str]

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    @property
    def positive_definite(self) -> bool:
        return True

    @property
    def continuous(self) -> bool:
        return True

    @property
    def polygonal_vertices(self) -> np.ndarray | None:
        """Exact sphere vertices sorted by angle, for families whose sphere is a polygon"""
        return None

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Hoelder(WeightFamily):
    p: float
    n: int = 2

    family: ClassVar[str] = FamilyKeys.HOELDER

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidSpace(f"The dimension must be a positive integer, found {self.n}")
        if math.isnan(self.p):
            raise InvalidSpace("The Hölder exponent cannot be NaN")

    @property
    def dimension(self) -> int:
        return self.n

    @property
    def positive_definite(self) -> bool:
        return self.p > 0 or (self.n == 1 and self.p != 0)

    @property
    def polygonal_vertices(self) -> np.ndarray | None:
        if self.n != 2:
            return None
        if self.p == 1:
            return np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        if self.p == math.inf:
            return np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
        return None

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        return hoelder_combine(np.abs(X), self.p)

    def to_dict(self) -> dict:
        return {"family": self.family, "dimension": self.n, "p": format_extended(self.p)}

    def label(self) -> str:
        suffix = "" if self.n == 2 else f",n={self.n}"
        return f"hoelder(p={_fmt(self.p)}{suffix})"


@dataclass(frozen=True)
class PolygonSphere(WeightFamily):
    """Weight whose unit sphere is a centrally symmetric polygon, star-shaped around the origin"""

    vertices: tuple[tuple[float, float], ...]

    family: ClassVar[str] = FamilyKeys.POLYGON

    _vertices: np.ndarray = field(init=False, repr=False, compare=False, hash=False)
    _angles: np.ndarray = field(init=False, repr=False, compare=False, hash=False)
    _denominators: np.ndarray = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        V = _sorted_polygon(self.vertices)
        edges_to = np.roll(V, -1, axis=0)

        object.__setattr__(self, "_vertices", V)
        object.__setattr__(self, "_angles", np.mod(np.arctan2(V[:, 1], V[:, 0]), 2 * np.pi))
        object.__setattr__(self, "_denominators", _cross(V, edges_to))

    @property
    def dimension(self) -> int:
        return 2

    @property
    def polygonal_vertices(self) -> np.ndarray:
        return self._vertices.copy()

    @property
    def shape(self) -> Polygon:
        return Polygon(self._vertices)

    @property
    def is_convex(self) -> bool:
        """Whether the unit ball is convex, i.e. whether the weight is a norm"""
        polygon = self.shape
        return bool(polygon.convex_hull.area - polygon.area <= 1e-12 * polygon.area)

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        X = upper_half(X)
        theta = np.arctan2(X[..., 1], X[..., 0])

        k = len(self._vertices)
        index = (np.searchsorted(self._angles, theta, side="right") - 1) % k
        a = self._vertices[index]
        b = self._vertices[(index + 1) % k]

        return np.maximum(_cross(X, b - a) / self._denominators[index], 0.0)

    def to_dict(self) -> dict:
        return {"family": self.family, "vertices": [list(map(float, v)) for v in self.vertices]}

    def label(self) -> str:
        return f"polygon(k={len(self._vertices)})"


@dataclass(frozen=True)
class Hexagon(WeightFamily):
    """Polygonal weight through (0,1), (1,r), (1,-r), (0,-1), (-1,-r), (-1,r). A norm iff r <= 1."""

    r: float

    family: ClassVar[str] = FamilyKeys.HEXAGON

    _polygon: PolygonSphere = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise InvalidSpace(f"The hexagon parameter r must be a finite real >= 0, found {self.r}")
        r = float(self.r)
        vertices = ((0.0, 1.0), (1.0, r), (1.0, -r), (0.0, -1.0), (-1.0, -r), (-1.0, r))
        object.__setattr__(self, "_polygon", PolygonSphere(vertices))

    @property
    def dimension(self) -> int:
        return 2

    @property
    def polygonal_vertices(self) -> np.ndarray:
        return self._polygon.polygonal_vertices

    @property
    def is_convex(self) -> bool:
        return self._polygon.is_convex

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        return self._polygon.evaluate(X)

    def to_dict(self) -> dict:
        return {"family": self.family, "r": float(self.r)}

    def label(self) -> str:
        return f"hexagon(r={_fmt(self.r)})"


@dataclass(frozen=True)
class RadialTable(WeightFamily):
    """Weight given by samples `(theta, R)` of the sphere radius, linearly interpolated in theta

    Angles are taken modulo pi (the weight is balanced). A direction falling in an angular
    gap wider than `max_gap` between consecutive samples has no bracketing samples.
    `overrides` replace the radius exactly at isolated directions.
    """

    samples: tuple[tuple[float, float], ...]
    overrides: tuple[tuple[float, float], ...] = ()
    max_gap: float = math.pi / 2
    tag: str | None = None

    family: ClassVar[str] = FamilyKeys.RADIAL

    _angles: np.ndarray = field(init=False, repr=False, compare=False, hash=False)
    _radii: np.ndarray = field(init=False, repr=False, compare=False, hash=False)
    _gaps: np.ndarray = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.samples) == 0:
            raise InvalidSpace("A radial table needs at least one sample")
        table = np.asarray(self.samples, dtype=float).reshape(-1, 2)
        for theta, radius in [*table, *np.asarray(self.overrides, dtype=float).reshape(-1, 2)]:
            if not (math.isfinite(theta) and math.isfinite(radius) and radius > 0):
                raise InvalidSpace(f"Radial samples need finite angles and radii > 0, found ({theta}, {radius})")

        angles = np.mod(table[:, 0], np.pi)
        angles, unique_index = np.unique(angles, return_index=True)
        radii = table[unique_index, 1]

        angles = np.concatenate([[angles[-1] - np.pi], angles, [angles[0] + np.pi]])
        radii = np.concatenate([[radii[-1]], radii, [radii[0]]])

        object.__setattr__(self, "_angles", angles)
        object.__setattr__(self, "_radii", radii)
        object.__setattr__(self, "_gaps", np.diff(angles))

    @property
    def dimension(self) -> int:
        return 2

    @property
    def continuous(self) -> bool:
        return len(self.overrides) == 0

    def radius(self, theta: np.ndarray) -> np.ndarray:
        theta = np.mod(theta, np.pi)

        index = np.clip(np.searchsorted(self._angles, theta, side="right") - 1, 0, len(self._gaps) - 1)
        if np.any(self._gaps[index] > self.max_gap):
            worst = float(np.atleast_1d(theta)[np.argmax(np.atleast_1d(self._gaps[index]))])
            raise InvalidSpace(f"Direction theta={worst:.6g} has no bracketing samples in the radial table")

        radius = np.interp(theta, self._angles, self._radii)
        for override_theta, override_radius in self.overrides:
            distance = np.abs(theta - np.mod(override_theta, np.pi))
            distance = np.minimum(distance, np.pi - distance)
            radius = np.where(distance <= OVERRIDE_ANGLE_TOL, override_radius, radius)
        return radius

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        X = upper_half(X)
        norm = np.hypot(X[..., 0], X[..., 1])
        theta = np.arctan2(X[..., 1], X[..., 0])
        theta = np.where(norm > 0, theta, self._angles[1])
        return norm / self.radius(theta)

    def to_dict(self) -> dict:
        if self.tag is not None:
            return {"family": self.tag}
        return {
            "family": self.family,
            "samples": [list(map(float, s)) for s in self.samples],
            "overrides": [list(map(float, s)) for s in self.overrides],
            "max_gap": float(self.max_gap),
        }

    def label(self) -> str:
        return self.tag or f"radial(k={len(self.samples)})"


@dataclass(frozen=True)
class PathologicalA(WeightFamily):
    """Weight whose unit sphere is the hyperbola set |x| |y| = 1, zero on both axes"""

    family: ClassVar[str] = FamilyKeys.PATHOLOGICAL_A

    @property
    def dimension(self) -> int:
        return 2

    @property
    def positive_definite(self) -> bool:
        return False

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        return np.sqrt(np.abs(X[..., 0] * X[..., 1]))

    def to_dict(self) -> dict:
        return {"family": self.family}

    def label(self) -> str:
        return self.family


def pathological_table(radius_on_axis: float, tag: str, samples: int = 720) -> RadialTable:
    """Euclidean circle whose points (±1, 0) are moved to (±radius_on_axis, 0)"""
    thetas = np.linspace(0, np.pi, samples, endpoint=False)
    return RadialTable(
        samples=tuple((float(theta), 1.0) for theta in thetas),
        overrides=((0.0, float(radius_on_axis)),),
        tag=tag,
    )


def pathological_b() -> RadialTable:
    return pathological_table(2.0, FamilyKeys.PATHOLOGICAL_B)


def pathological_c() -> RadialTable:
    return pathological_table(0.5, FamilyKeys.PATHOLOGICAL_C)


@dataclass(frozen=True)
class Product(WeightFamily):
    """Weight `||(a, b)||_p` on `A x B`, combining the factor weights with the Hölder rule"""

    left: WeightFamily
    right: WeightFamily
    p: float

    family: ClassVar[str] = FamilyKeys.PRODUCT

    def __post_init__(self):
        if math.isnan(self.p):
            raise InvalidSpace("The product exponent cannot be NaN")

    @property
    def dimension(self) -> int:
        return self.left.dimension + self.right.dimension

    @property
    def positive_definite(self) -> bool:
        return self.p > 0 and self.left.positive_definite and self.right.positive_definite

    @property
    def continuous(self) -> bool:
        return self.left.continuous and self.right.continuous

    @property
    def polygonal_vertices(self) -> np.ndarray | None:
        """Vertices of a product of two lines under the rule `p = 1` or `p = inf`"""
        if self.left.dimension != 1 or self.right.dimension != 1 or self.p not in (1, math.inf):
            return None
        if not self.positive_definite:
            return None
        a = 1 / float(self.left.evaluate(np.ones(1)))
        b = 1 / float(self.right.evaluate(np.ones(1)))
        if self.p == 1:
            return np.array([[a, 0.0], [0.0, b], [-a, 0.0], [0.0, -b]])
        return np.array([[a, b], [-a, b], [-a, -b], [a, -b]])

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        n_left = self.left.dimension
        a = self.left.evaluate(X[..., :n_left])
        b = self.right.evaluate(X[..., n_left:])
        return hoelder_combine(np.stack([a, b], axis=-1), self.p)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "p": format_extended(self.p),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    def label(self) -> str:
        return f"product(p={_fmt(self.p)},{self.left.label()},{self.right.label()})"


def _sorted_polygon(vertices) -> np.ndarray:
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[1] != 2 or len(V) < 4:
        raise InvalidSpace("A polygon sphere needs at least 4 two-dimensional vertices")
    if not np.all(np.isfinite(V)):
        raise InvalidSpace("Polygon vertices must be finite")

    V = np.unique(V + 0.0, axis=0)
    if np.any(np.hypot(V[:, 0], V[:, 1]) == 0):
        raise InvalidSpace("The origin cannot be a vertex of a unit sphere")

    scale = np.abs(V).max()
    for vertex in V:
        if np.abs(V + vertex).sum(axis=1).min() > SYMMETRY_TOL * scale:
            raise InvalidSpace(f"Polygon sphere is not centrally symmetric: -{tuple(vertex)} is missing")

    angles = np.mod(np.arctan2(V[:, 1], V[:, 0]), 2 * np.pi)
    order = np.argsort(angles, kind="stable")
    V, angles = V[order], angles[order]

    if np.any(np.diff(angles) <= 0):
        raise InvalidSpace("Two polygon vertices lie on the same ray from the origin")
    if np.any(_cross(V, np.roll(V, -1, axis=0)) <= 0):
        raise InvalidSpace("The polygon is not star-shaped around the origin")

    polygon = Polygon(V)
    if not (polygon.is_valid and polygon.contains(Point(0.0, 0.0))):
        raise InvalidSpace(f"Invalid polygon sphere: {explain_validity(polygon)}")

    return V


def _fmt(value: float) -> str:
    return f"{format_extended(value):g}" if math.isfinite(value) else str(format_extended(value))
