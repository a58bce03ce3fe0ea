"""Closed forms used as oracles: the flat-segment value and the E map of a pair of unit vectors."""

from dataclasses import dataclass

import numpy as np

from .._errors import ParameterOutOfRange
from ..space import SpaceDescriptor
from ..space.weights import as_vector

UNIT_TOL = 1e-9


def _check_flat_parameter(t: np.ndarray):
    if not np.all(np.abs(t) < 1):
        raise ParameterOutOfRange(f"The flat-segment formulas need |t| < 1, found t={t.tolist()}")


def flat_segment_value(t, rho: float):
    """`(1 - t**2) (1 + t**2) ** rho`, the normalized rho-product of `z + t w` and `z - t w` on a flat segment"""
    t = np.asarray(t, dtype=float)
    _check_flat_parameter(t)
    value = (1 - t**2) * np.exp(rho * np.log1p(t**2))
    return float(value) if value.ndim == 0 else value


def flat_segment_threshold(t: float) -> float:
    """Exponent `-log(1 - t**2) / log(1 + t**2)` above which `flat_segment_value(t, rho) > 1`

    The threshold tends to 1 when `t` tends to 0, which is its value at `t = 0`.
    """
    _check_flat_parameter(np.asarray(t, dtype=float))
    if t == 0:
        return 1.0
    return float(-np.log1p(-(t**2)) / np.log1p(t**2))


def optimal_flat_parameter(rho: float) -> float:
    """Maximizer `sqrt((rho - 1) / (rho + 1))` of `flat_segment_value` for `rho > 1`, else 0"""
    if rho <= 1:
        return 0.0
    return float(np.sqrt((rho - 1) / (rho + 1)))


def _check_unit_pair(space: SpaceDescriptor, v: np.ndarray, w: np.ndarray):
    weights = space.weights(np.stack([v, w]))
    if np.any(np.abs(weights - 1) > UNIT_TOL):
        raise ValueError(f"The E map needs unit vectors, found weights {weights.tolist()}")
    if np.linalg.matrix_rank(np.stack([v, w])) < 2:
        raise ValueError(f"The E map needs linearly independent vectors, found {v.tolist()} and {w.tolist()}")


def e_map_values(space: SpaceDescriptor, v, w, t) -> np.ndarray:
    """Vectorized `E(t) = (||v + u||**2 - ||v - u||**2) / 4` with `u = (w + t v) / ||w + t v||`"""
    v, w = as_vector(space, v), as_vector(space, w)
    _check_unit_pair(space, v, w)

    t = np.atleast_1d(np.asarray(t, dtype=float))
    X = w[None, :] + t[:, None] * v[None, :]
    U = X / space.weights(X)[:, None]
    return (space.weights(v + U) ** 2 - space.weights(v - U) ** 2) / 4


def e_map(space: SpaceDescriptor, v, w, t: float) -> float:
    """The map `E(t) = (||v + u||**2 - ||v - u||**2) / 4` with `u = (w + t v) / ||w + t v||`

    For independent unit vectors `v, w`, `E(0) = Delta(v, w) / 4` and `E` is a homeomorphism from
    the real line onto `(-1, 1)`.

    Args:
        space: A positive definite space
        v: A unit vector
        w: A unit vector independent of `v`
        t: The parameter

    Returns:
        `E(t)`
    """
    return float(e_map_values(space, v, w, t)[0])


def default_t_grid(points: int = 150, low: float = -3, high: float = 3) -> np.ndarray:
    """Symmetric logarithmic grid of `t`, including 0"""
    positive = np.logspace(low, high, points)
    return np.concatenate([-positive[::-1], [0.0], positive])


@dataclass
class EMapScan:
    t: np.ndarray
    values: np.ndarray
    monotonic: bool
    inside: bool

    def to_dict(self) -> dict:
        return {
            "monotonic": self.monotonic,
            "inside": self.inside,
            "t_min": float(self.t[0]),
            "t_max": float(self.t[-1]),
            "min": float(self.values.min()),
            "max": float(self.values.max()),
        }


def e_map_scan(space: SpaceDescriptor, v, w, t_grid=None) -> EMapScan:
    """Evaluate `E` on a grid and report whether it is strictly monotone and stays inside `(-1, 1)`"""
    t = default_t_grid() if t_grid is None else np.sort(np.asarray(t_grid, dtype=float))
    values = e_map_values(space, v, w, t)
    steps = np.diff(values)
    return EMapScan(
        t=t,
        values=values,
        monotonic=bool(np.all(steps > 0) or np.all(steps < 0)),
        inside=bool(np.all(np.abs(values) < 1)),
    )
