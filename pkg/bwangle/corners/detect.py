import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .._constants import CornerKinds
from ..geometry import rho_product
from ..space import SpaceDescriptor
from ._sphere import SpherePolyline, fit_segments

log = logging.getLogger(__name__)

CORNER_TOL = 1e-9
DEFAULT_DELTA_SAMPLES = 11
MAX_HALVINGS = 20


@dataclass(frozen=True)
class CornerWitness:
    """A corner `y_hat` of the unit sphere, with the frame `(x_bar, m_minus, m_plus)` in which it is defined.

    For a convex corner, `||d x_bar + (1 + d m_minus) y_hat|| = 1 = ||-d x_bar + (1 - d m_plus) y_hat||`
    for every `d` in `[0, delta_max]`. For a concave corner, `m_minus` and `m_plus` are exchanged.
    """

    y_hat: tuple[float, float]
    x_bar: tuple[float, float]
    m_minus: float
    m_plus: float
    kind: str
    delta_max: float

    @property
    def slopes(self) -> tuple[float, float]:
        """Slopes of the `+x_bar` and `-x_bar` sides, in the order used by the defining identities"""
        if self.kind == CornerKinds.CONVEX:
            return self.m_minus, self.m_plus
        return self.m_plus, self.m_minus

    def unit_pair(self, delta: float) -> tuple[np.ndarray, np.ndarray]:
        """The two vectors of the defining identities at `delta`"""
        y_hat, x_bar = np.asarray(self.y_hat), np.asarray(self.x_bar)
        plus_slope, minus_slope = self.slopes
        return delta * x_bar + (1 + delta * plus_slope) * y_hat, -delta * x_bar + (1 - delta * minus_slope) * y_hat

    def to_dict(self) -> dict:
        return {
            "y_hat": list(self.y_hat),
            "x_bar": list(self.x_bar),
            "m_minus": self.m_minus,
            "m_plus": self.m_plus,
            "kind": self.kind,
            "delta_max": self.delta_max,
        }


@dataclass
class CornerViolation:
    """Largest `|T| B**rho` over the corner pairs, and the `delta` where it drops back to 1"""

    delta: float
    value: float
    threshold_delta: float | None

    @property
    def violates(self) -> bool:
        return self.value > 1

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "value": self.value,
            "threshold_delta": self.threshold_delta,
            "violates": self.violates,
        }


def _deviation(space: SpaceDescriptor, witness: CornerWitness, deltas: np.ndarray) -> float:
    vectors = np.array([vector for delta in deltas for vector in witness.unit_pair(float(delta))])
    return float(np.abs(space.weights(vectors) - 1).max())


def verify_corner(space: SpaceDescriptor, witness: CornerWitness, delta_samples=None) -> bool:
    """Whether both defining identities hold within `1e-9` on a grid of `delta`

    Args:
        space: A 2-D space
        witness: The corner to verify
        delta_samples: Number of equally spaced values in `[0, delta_max]`, or an explicit list of values

    Returns:
        `True` iff the largest deviation of the weights from 1 is at most `1e-9`
    """
    if delta_samples is None:
        delta_samples = DEFAULT_DELTA_SAMPLES
    if np.ndim(delta_samples) == 0:
        deltas = np.linspace(0, witness.delta_max, int(delta_samples))
    else:
        deltas = np.asarray(delta_samples, dtype=float)
    return _deviation(space, witness, deltas) <= CORNER_TOL


def _corner_at(
    space: SpaceDescriptor, y_hat: np.ndarray, before: np.ndarray, after: np.ndarray
) -> CornerWitness | None:
    """Corner frame at `y_hat`, between the segment ending there and the one starting there (counter-clockwise)"""
    x_bar = np.array([y_hat[1], -y_hat[0]]) / np.linalg.norm(y_hat)
    basis = np.column_stack([x_bar, y_hat])

    alpha_plus, beta_plus = np.linalg.solve(basis, before - y_hat)
    alpha_minus, beta_minus = np.linalg.solve(basis, after - y_hat)
    if not (alpha_plus > 0 and alpha_minus < 0):
        return None

    plus_side_slope, minus_side_slope = beta_plus / alpha_plus, beta_minus / alpha_minus
    if abs(plus_side_slope - minus_side_slope) <= CORNER_TOL:
        return None

    if plus_side_slope < minus_side_slope:
        kind, m_minus, m_plus = CornerKinds.CONVEX, plus_side_slope, minus_side_slope
    else:
        kind, m_minus, m_plus = CornerKinds.CONCAVE, minus_side_slope, plus_side_slope

    witness = CornerWitness(
        y_hat=tuple(map(float, y_hat)),
        x_bar=tuple(map(float, x_bar)),
        m_minus=float(m_minus),
        m_plus=float(m_plus),
        kind=kind,
        delta_max=float(min(1.0, alpha_plus, -alpha_minus)),
    )

    for _ in range(MAX_HALVINGS):
        if verify_corner(space, witness):
            return witness
        witness = replace(witness, delta_max=witness.delta_max / 2)

    log.warning(f"Dropping the candidate corner at {y_hat.tolist()}: the defining identities never verify")
    return None


def _meeting_point(polyline: SpherePolyline, segment: tuple[int, int], following: tuple[int, int]):
    """Point where two consecutive segments meet, or `None` if they are separated by more than one sample"""
    points, k = polyline.points, len(polyline.points)
    (start, end), (next_start, next_end) = segment, following

    if end == next_start:
        return points[end]
    if next_start != (end + 1) % k:
        return None

    # the corner lies between two samples: intersect the lines carrying both segments
    direction, next_direction = points[end] - points[start], points[next_end] - points[next_start]
    system = np.column_stack([direction, -next_direction])
    if abs(np.linalg.det(system)) <= CORNER_TOL * np.linalg.norm(direction) * np.linalg.norm(next_direction):
        return None
    t, _ = np.linalg.solve(system, points[next_start] - points[start])
    return points[start] + t * direction


def corners_of(space: SpaceDescriptor, polyline: SpherePolyline) -> list[CornerWitness]:
    """Corners where consecutive segments of a sphere polyline meet"""
    segments = polyline.segments
    if len(segments) < 2:
        return []

    corners = []
    for segment, following in zip(segments, segments[1:] + segments[:1]):
        y_hat = _meeting_point(polyline, segment, following)
        if y_hat is None:
            continue
        y_hat = y_hat / space.weights(y_hat)
        witness = _corner_at(space, y_hat, polyline.points[segment[0]], polyline.points[following[1]])
        if witness is not None:
            corners.append(witness)
    return corners


def find_corners(space: SpaceDescriptor, resolution: int | None = None) -> list[CornerWitness]:
    """Detect the convex and concave corners of the unit sphere of a 2-D space

    Maximal straight segments are fitted on the sphere polyline (exact vertices for polygonal
    spheres). Wherever two segments meet, the corner frame uses `x_bar`, the clockwise unit
    normal of `y_hat`, and the one-sided slopes of the two segments in the `(x_bar, y_hat)`
    coordinates. `delta_max` is halved until both defining identities verify.

    Args:
        space: A positive definite 2-D space
        resolution: Number of sampled directions for non-polygonal spheres

    Returns:
        The list of verified `CornerWitness`, counter-clockwise
    """
    corners = corners_of(space, fit_segments(space, resolution))
    log.info(f"Found {len(corners)} corners on the unit sphere of {space.label}")
    return corners


def _corner_terms(space: SpaceDescriptor, witness: CornerWitness) -> tuple[float, float]:
    """Linear coefficient `a` and squared weight `L**2` of `2 x_bar + (m_minus + m_plus) y_hat`"""
    y_hat, x_bar = np.asarray(witness.y_hat), np.asarray(witness.x_bar)
    length = float(space.weights(2 * x_bar + (witness.m_minus + witness.m_plus) * y_hat))

    if witness.kind == CornerKinds.CONVEX:
        return witness.m_minus - witness.m_plus, length**2
    return witness.m_plus - witness.m_minus, length**2


def analytic_corner_product(space: SpaceDescriptor, witness: CornerWitness, delta, rho: float):
    """Closed form `T * B**rho` of the rho-product of the corner pair at `delta` (vectorized in `delta`)

    `T = 1 + a d + (a**2 - L**2) d**2 / 4` and `B = 1 + a d + (a**2 + L**2) d**2 / 4` are the quarter
    difference and quarter sum of the squared weights of `u + v = (2 + a d) y_hat` and `u - v`.
    """
    a, length2 = _corner_terms(space, witness)
    delta = np.asarray(delta, dtype=float)
    top = 1 + delta * a + delta**2 * (a**2 - length2) / 4
    bottom = 1 + delta * a + delta**2 * (a**2 + length2) / 4
    return top * np.exp(rho * np.log(bottom))


def corner_pair_product(
    space: SpaceDescriptor, witness: CornerWitness, delta: float, rho: float
) -> tuple[float, float]:
    """Numeric rho-product of the two unit vectors of a corner at `delta`, and its closed form

    Args:
        space: A 2-D space
        witness: A corner, verified at `delta`
        delta: The corner parameter
        rho: The exponent

    Returns:
        `(numeric, analytic)`
    """
    if not verify_corner(space, witness, [delta]):
        raise ValueError(f"The corner identities of {witness.y_hat} do not hold at delta={delta}")
    v, w = witness.unit_pair(delta)
    return rho_product(space, v, w, rho), float(analytic_corner_product(space, witness, delta, rho))


def corner_violation(
    space: SpaceDescriptor, witness: CornerWitness, rho: float, samples: int = 2001
) -> CornerViolation:
    """Largest `|T| B**rho` over `delta` in `(0, delta_max]`, with the `delta` above which it is back below 1

    A dense scan, geometric near 0 then linear, is refined by bounded scalar maximization.
    """
    top = witness.delta_max
    deltas = np.unique(np.concatenate([np.geomspace(top * 1e-6, top, samples // 2), np.linspace(0, top, samples)]))
    deltas = deltas[deltas > 0]

    def value(delta):
        return np.abs(analytic_corner_product(space, witness, delta, rho))

    values = value(deltas)
    best = int(np.argmax(values))
    low, high = deltas[max(best - 1, 0)], deltas[min(best + 1, len(deltas) - 1)]
    best_delta, best_value = float(deltas[best]), float(values[best])

    if high > low:
        result = minimize_scalar(lambda d: -float(value(d)), bounds=(low, high), method="bounded")
        if -result.fun > best_value:
            best_delta, best_value = float(result.x), float(-result.fun)

    threshold = None
    if best_value > 1:
        below = np.flatnonzero((deltas > best_delta) & (values < 1))
        if len(below):
            threshold = float(brentq(lambda d: float(value(d)) - 1, best_delta, deltas[below[0]]))

    return CornerViolation(delta=best_delta, value=best_value, threshold_delta=threshold)
