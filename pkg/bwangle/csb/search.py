import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .._settings import settings
from ..space import SpaceDescriptor
from ._features import sphere_pairs
from ._grid import pair_table, pair_values, pairs_from_params, vector_pair_values

log = logging.getLogger(__name__)

CANDIDATES_PER_COORDINATE = 9
SHRINK_FACTOR = 0.5
RANDOM_INITIAL_WIDTH = 0.25
MIN_NESTED_RESOLUTION = 32
POLISHED_CANDIDATES = 2
POLISH_RADIUS = 0.05
POLISH_EVALUATIONS = 200


@dataclass
class CsbReport:
    """Estimated supremum over unit pairs of `|Delta / 4| (Sigma / 4) ** rho`, and a pair attaining it.

    The estimate is a lower bound of the true supremum: `holds` means that no violation of the
    Cauchy-Schwarz-Bunjakowsky inequality was found at this resolution.
    """

    rho: float
    sup_estimate: float
    witness: tuple[list[float], list[float]]
    holds: bool
    grid_resolution: int
    refinement_steps: int
    tolerance: float
    seed: int
    grid_estimate: float
    evaluations: int

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "sup_estimate": self.sup_estimate,
            "holds": self.holds,
            "witness": list(self.witness),
            "grid_estimate": self.grid_estimate,
            "grid_resolution": self.grid_resolution,
            "refinement_steps": self.refinement_steps,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "evaluations": self.evaluations,
        }


def top_indices(values: np.ndarray, k: int) -> np.ndarray:
    """Indices of the `k` largest values, ties broken by the lowest index"""
    k = min(k, len(values))
    threshold = np.partition(values, len(values) - k)[len(values) - k]
    candidates = np.flatnonzero(values >= threshold)
    order = np.argsort(-values[candidates], kind="stable")
    return candidates[order[:k]]


def _refine(
    space: SpaceDescriptor, params: np.ndarray, values: np.ndarray, rho: float, steps: int, width: float
) -> tuple[np.ndarray, np.ndarray, int]:
    """Coordinate ascent with a shrinking bracket, run on every start at once

    Each step scans every coordinate over a centered bracket and moves a start only if its value
    strictly increases, so the result is non-decreasing in the number of steps.
    """
    offsets = np.linspace(-1, 1, CANDIDATES_PER_COORDINATE)
    n_starts, n_params = params.shape
    evaluations = 0

    for _ in range(steps):
        for coordinate in range(n_params):
            candidates = np.repeat(params[:, None, :], len(offsets), axis=1)
            candidates[:, :, coordinate] += width * offsets
            candidate_values = pair_values(space, candidates.reshape(-1, n_params), rho).reshape(n_starts, -1)
            evaluations += candidate_values.size

            best = np.argmax(candidate_values, axis=1)
            best_values = candidate_values[np.arange(n_starts), best]
            improved = best_values > values
            params[improved] = candidates[improved, best[improved]]
            values[improved] = best_values[improved]
        width *= SHRINK_FACTOR

    return params, values, evaluations


def nested_resolutions(space: SpaceDescriptor, resolution: int) -> list[int]:
    """Resolutions searched together, finest first

    In dimension 2, the grid of half an even resolution is made of the same directions. Every
    nested level down to `MIN_NESTED_RESOLUTION` is searched, so the estimate never decreases
    when the resolution doubles.
    """
    levels = [resolution]
    if space.dimension == 2:
        while levels[-1] % 2 == 0 and levels[-1] // 2 >= MIN_NESTED_RESOLUTION:
            levels.append(levels[-1] // 2)
    return levels


def _polish(
    space: SpaceDescriptor, params: np.ndarray, values: np.ndarray, rho: float
) -> tuple[np.ndarray, np.ndarray, int]:
    """Bounded Powell search in a box of half-width `POLISH_RADIUS` around each start

    A start only moves if its value strictly increases.
    """
    params, values = params.copy(), values.copy()
    evaluations = 0

    def objective(x: np.ndarray) -> float:
        value = float(pair_values(space, x[None], rho)[0])
        return -value if np.isfinite(value) else 0.0

    for i, start in enumerate(params):
        result = minimize(
            objective,
            start,
            method="Powell",
            bounds=[(x - POLISH_RADIUS, x + POLISH_RADIUS) for x in start],
            options={"maxfev": POLISH_EVALUATIONS, "xtol": 1e-12, "ftol": 1e-15},
        )
        evaluations += result.nfev
        value = float(pair_values(space, result.x[None], rho)[0])
        if value > values[i]:
            params[i], values[i] = result.x, value

    return params, values, evaluations


@dataclass
class _Candidates:
    values: np.ndarray
    U: np.ndarray
    V: np.ndarray
    evaluations: int


def _search_level(
    space: SpaceDescriptor, rho: float, resolution: int, refine: int, seed: int
) -> tuple[_Candidates, float]:
    """Refined best pairs of one candidate table, and the best raw table value"""
    table = pair_table(space, resolution, settings.csb_ladder_depth, seed)

    values = table.values(rho)
    starts = top_indices(values, settings.csb_starts)
    grid_estimate = float(values[starts[0]])

    params = table.params_of(starts).astype(float)
    refined = pair_values(space, params, rho)
    evaluations = len(table)

    if refine > 0:
        # the polish starts from the raw grid pairs: the estimate is non-decreasing in `refine`
        order = top_indices(refined, POLISHED_CANDIDATES)
        polished_params, polished, polish_evaluations = _polish(space, params[order], refined[order], rho)

        width = table.step if space.dimension == 2 else RANDOM_INITIAL_WIDTH
        params, refined, refined_evaluations = _refine(space, params, refined, rho, refine, width)

        params, refined = np.concatenate([params, polished_params]), np.concatenate([refined, polished])
        evaluations += refined_evaluations + polish_evaluations

    U, V, _ = pairs_from_params(space, params)
    return _Candidates(refined, U, V, evaluations), grid_estimate


def _search_sphere(space: SpaceDescriptor, rho: float, refine: int) -> _Candidates:
    """Exact pairs of a polygonal sphere (vertices, corners, flat segments), polished if `refine > 0`"""
    U, V = sphere_pairs(space, rho)
    if len(U) == 0:
        return _Candidates(np.empty(0), U, V, 0)

    values = vector_pair_values(space, U, V, np.ones(len(U), dtype=bool), rho)
    candidates = _Candidates(values, U, V, len(U))

    if refine > 0:
        theta_u, theta_v = np.arctan2(U[:, 1], U[:, 0]), np.arctan2(V[:, 1], V[:, 0])
        params = np.stack([(theta_u + theta_v) / 2, (theta_u - theta_v) / 2], axis=-1)
        order = top_indices(values, POLISHED_CANDIDATES)
        params, polished, evaluations = _polish(space, params[order], values[order], rho)
        candidates.evaluations += evaluations

        moved = polished > values[order]
        Up, Vp, _ = pairs_from_params(space, params[moved])
        candidates.values = np.concatenate([values, polished[moved]])
        candidates.U, candidates.V = np.concatenate([U, Up]), np.concatenate([V, Vp])

    return candidates


def csb_sup(
    space: SpaceDescriptor,
    rho: float,
    resolution: int | None = None,
    refine: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
) -> CsbReport:
    """Estimate `g(rho)`, the supremum over pairs of unit vectors of `|Delta / 4| (Sigma / 4) ** rho`

    In dimension 2 the candidates are the `(theta_1, theta_2)` grids of unit-sphere directions at
    `resolution` and at its nested halvings, each with a near-diagonal ladder, plus the exact
    vertex, corner and flat-segment pairs of polygonal spheres. Otherwise, seeded random pairs.
    The best candidates (ties broken by the lowest index) are refined by coordinate ascent with a
    shrinking bracket, and the two best raw candidates of each stage are polished by a bounded
    Powell search. `refine=0` keeps the raw candidates.

    Args:
        space: A positive definite space
        rho: The exponent
        resolution: Number of grid directions (dimension 2), or of random pairs (otherwise)
        refine: Number of refinement steps
        tol: Tolerance of the `holds` predicate, `sup_estimate <= 1 + tol`
        seed: Seed of the random pairs (unused in dimension 2)

    Returns:
        A `CsbReport`
    """
    seed = settings.seed if seed is None else seed
    refine = settings.csb_refine if refine is None else refine
    tol = settings.csb_tolerance if tol is None else tol
    if resolution is None:
        resolution = settings.csb_resolution if space.dimension == 2 else settings.csb_random_pairs
    assert resolution >= 1 and refine >= 0, "The resolution must be positive and the refinement steps non-negative"

    stages, grid_estimates = [], []
    for level in nested_resolutions(space, int(resolution)):
        candidates, grid_estimate = _search_level(space, rho, level, refine, seed)
        stages.append(candidates)
        grid_estimates.append(grid_estimate)
    stages.append(_search_sphere(space, rho, refine))

    values = np.concatenate([stage.values for stage in stages])
    U = np.concatenate([stage.U for stage in stages])
    V = np.concatenate([stage.V for stage in stages])
    best = int(np.argmax(values))
    grid_estimate = max(grid_estimates)
    sup_estimate = max(float(values[best]), grid_estimate)

    report = CsbReport(
        rho=float(rho),
        sup_estimate=sup_estimate,
        witness=(U[best].tolist(), V[best].tolist()),
        holds=sup_estimate <= 1 + tol,
        grid_resolution=int(resolution),
        refinement_steps=refine,
        tolerance=tol,
        seed=seed,
        grid_estimate=grid_estimate,
        evaluations=sum(stage.evaluations for stage in stages),
    )
    log.debug(f"CSB search on {space.label} at rho={rho}: sup={sup_estimate:.12g}")
    return report


def has_angle(space: SpaceDescriptor, rho: float, tol: float | None = None, **kwargs) -> bool:
    """Whether the space has the angle of exponent `rho`, i.e. no CSB violation was found"""
    report = csb_sup(space, rho, tol=tol, **kwargs)
    return report.holds


def validity_scan(space: SpaceDescriptor, rho_grid, tol: float | None = None, **kwargs) -> np.ndarray:
    """Full-grid audit: the `has_angle` indicator at every exponent of `rho_grid`"""
    return np.array([has_angle(space, float(rho), tol=tol, **kwargs) for rho in rho_grid], dtype=bool)


def is_interval(indicator: np.ndarray) -> bool:
    """Whether the `True` entries of a boolean sequence are contiguous"""
    indices = np.flatnonzero(indicator)
    return len(indices) == 0 or bool(indices[-1] - indices[0] + 1 == len(indices))
