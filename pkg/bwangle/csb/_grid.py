"""Cached tables of candidate unit-vector pairs for the CSB search.

A table stores, for every candidate pair, `|Delta / 4|` and `log(Sigma / 4)`, so that the CSB
ratio `|Delta / 4| (Sigma / 4) ** rho` at any exponent costs a single vectorized `exp`.

- In dimension 2, pairs are parametrized by `(m, h)`, i.e. the directions `m + h` and `m - h`.
  The table holds the full `N x N` direction grid (row-major, so index order is lexicographic
  in `(theta_1, theta_2)`), followed by a near-diagonal ladder `(theta_i + h_k, theta_i - h_k)`
  with `h_k = step / 2**k`, which resolves straddles of sphere corners finer than the grid.
- In other dimensions, pairs are parametrized by the raw concatenated vectors `(x, y)`, drawn
  from a seeded Gaussian, plus a ladder of nearby pairs `(u, u + h_k g)`.

Grid tables do not depend on the seed and are cached apart from the much larger random tables.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .._constants import ZERO_WEIGHT_FRACTION
from .._errors import NotPositiveDefinite, NumericalFailure
from ..geometry.rho import quarter_terms, unit_sd
from ..space import SpaceDescriptor
from ..space.weights import angular_grid, unit_points

log = logging.getLogger(__name__)

ROW_CHUNK = 128
LADDER_BASES = 4096


@dataclass(frozen=True, eq=False)
class PairTable:
    space: SpaceDescriptor
    resolution: int
    ladder_depth: int
    abs_delta4: np.ndarray
    log_sigma4: np.ndarray
    valid: np.ndarray
    params: np.ndarray | None = None  # only stored outside dimension 2

    def __len__(self) -> int:
        return len(self.abs_delta4)

    @property
    def step(self) -> float:
        return 2 * np.pi / self.resolution

    def values(self, rho: float) -> np.ndarray:
        with np.errstate(over="ignore"):
            values = self.abs_delta4 * np.exp(rho * self.log_sigma4)
        return np.where(self.valid, values, -np.inf)

    def params_of(self, indices: np.ndarray) -> np.ndarray:
        """Pair parameters of table entries"""
        if self.params is not None:
            return self.params[indices]

        indices = np.asarray(indices)
        N, L = self.resolution, self.ladder_depth
        thetas = angular_grid(N)

        in_grid = indices < N * N
        ladder = np.maximum(indices - N * N, 0)

        theta_a = np.where(in_grid, thetas[np.minimum(indices, N * N - 1) // N], 0.0)
        theta_b = np.where(in_grid, thetas[np.minimum(indices, N * N - 1) % N], 0.0)
        m = np.where(in_grid, (theta_a + theta_b) / 2, thetas[ladder // L])
        h = np.where(in_grid, (theta_a - theta_b) / 2, self.step * 2.0 ** -(ladder % L + 1))
        return np.stack([m, h], axis=-1)


def pairs_from_params(space: SpaceDescriptor, params: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit vector pairs `(U, V)` of parameters, and the mask of pairs with non-zero weights"""
    if space.dimension == 2:
        U, valid_u = unit_points(space, params[..., 0] + params[..., 1])
        V, valid_v = unit_points(space, params[..., 0] - params[..., 1])
        return U, V, valid_u & valid_v

    n = space.dimension
    X, Y = params[..., :n], params[..., n:]
    wx, wy = space.weights(X), space.weights(Y)
    valid = (wx > 0) & (wy > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        U = X / np.where(valid, wx, 1.0)[..., None]
        V = Y / np.where(valid, wy, 1.0)[..., None]
    return U, V, valid


def pair_values(space: SpaceDescriptor, params: np.ndarray, rho: float) -> np.ndarray:
    """CSB ratio `|Delta / 4| (Sigma / 4) ** rho` of parametrized pairs (`-inf` on invalid pairs)"""
    return vector_pair_values(space, *pairs_from_params(space, params), rho)


def vector_pair_values(
    space: SpaceDescriptor, U: np.ndarray, V: np.ndarray, valid: np.ndarray, rho: float
) -> np.ndarray:
    """CSB ratio of pairs of unit vectors (`-inf` where `valid` is false)"""
    abs_delta4, log_sigma4 = _terms(space, U, V, valid)
    with np.errstate(over="ignore"):
        values = abs_delta4 * np.exp(rho * log_sigma4)
    return np.where(valid, values, -np.inf)


def _terms(space: SpaceDescriptor, U: np.ndarray, V: np.ndarray, valid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    delta4, sigma4 = quarter_terms(*unit_sd(space, U, V))
    if np.any(valid & ~(sigma4 > 0)):
        raise NumericalFailure(f"Sigma vanished for a pair of unit vectors of {space.label}")
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.abs(delta4), np.where(valid, np.log(np.where(valid, sigma4, 1.0)), 0.0)


def pair_table(space: SpaceDescriptor, resolution: int, ladder_depth: int, seed: int) -> PairTable:
    """Candidate pair table of a space: the direction grid in dimension 2, `resolution` random pairs otherwise"""
    if not space.positive_definite:
        raise NotPositiveDefinite(f"The CSB search requires a positive definite space, {space.label} is not")

    if space.dimension == 2:
        return grid_table(space, resolution, ladder_depth)
    return random_table(space, ladder_depth, resolution, seed)


@lru_cache(maxsize=16)
def grid_table(space: SpaceDescriptor, resolution: int, ladder_depth: int) -> PairTable:
    N, L = resolution, ladder_depth
    log.info(f"Computing the {N}x{N} pair grid of {space.label}")

    thetas = angular_grid(N)
    U, valid = unit_points(space, thetas)
    if (~valid).sum() > ZERO_WEIGHT_FRACTION * N:
        raise NotPositiveDefinite(f"{(~valid).sum()} of {N} grid directions have zero weight in {space.label}")

    abs_delta4, log_sigma4, valid_pairs = [], [], []
    for start in range(0, N, ROW_CHUNK):
        rows = slice(start, min(start + ROW_CHUNK, N))
        chunk_valid = valid[rows, None] & valid[None, :]
        a, b = _terms(space, U[rows, None, :], U[None, :, :], chunk_valid)
        abs_delta4.append(a.ravel())
        log_sigma4.append(b.ravel())
        valid_pairs.append(chunk_valid.ravel())

    h = (2 * np.pi / N) * 2.0 ** -np.arange(1, L + 1)
    m = np.repeat(thetas, L)
    ladder_params = np.stack([m, np.tile(h, N)], axis=-1)
    Ua, Ub, ladder_valid = pairs_from_params(space, ladder_params)
    a, b = _terms(space, Ua, Ub, ladder_valid)

    return PairTable(
        space=space,
        resolution=N,
        ladder_depth=L,
        abs_delta4=np.concatenate([*abs_delta4, a]),
        log_sigma4=np.concatenate([*log_sigma4, b]),
        valid=np.concatenate([*valid_pairs, ladder_valid]),
    )


@lru_cache(maxsize=2)
def random_table(space: SpaceDescriptor, ladder_depth: int, random_pairs: int, seed: int) -> PairTable:
    n = space.dimension
    log.info(f"Sampling {random_pairs} random pairs of {space.label} (seed {seed})")

    rng = np.random.default_rng(seed)
    random_params = rng.normal(size=(random_pairs, 2 * n))

    bases = rng.normal(size=(LADDER_BASES, n))
    offsets = rng.normal(size=(LADDER_BASES, n))
    offsets /= np.linalg.norm(offsets, axis=-1, keepdims=True)
    h = 2.0 ** -np.arange(1, ladder_depth + 1)
    nearby = bases[:, None, :] + h[None, :, None] * offsets[:, None, :]
    ladder_params = np.concatenate([np.repeat(bases, ladder_depth, axis=0), nearby.reshape(-1, n)], axis=-1)

    params = np.concatenate([random_params, ladder_params])
    U, V, valid = pairs_from_params(space, params)
    if (~valid).sum() > ZERO_WEIGHT_FRACTION * len(params):
        raise NotPositiveDefinite(f"Too many sampled vectors have zero weight in {space.label}")
    abs_delta4, log_sigma4 = _terms(space, U, V, valid)

    return PairTable(
        space=space,
        resolution=random_pairs,
        ladder_depth=ladder_depth,
        abs_delta4=abs_delta4,
        log_sigma4=log_sigma4,
        valid=valid,
        params=params,
    )
